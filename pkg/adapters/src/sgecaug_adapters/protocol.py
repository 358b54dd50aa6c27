"""Server side of the adapter protocol: one JSON request per stdin line,
one JSON response per stdout line, matched by id. Responses may be emitted
in any order; a per-request failure becomes an error response for that id
and never aborts the stream."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

from . import PROTOCOL_VERSION

TASKS = ("reverse_gec", "tts", "asr", "embed", "grade_text", "grade_audio")


class AdapterConfigError(ValueError):
    pass


@dataclass
class AdapterManifest:
    """Self-description printed by --info and checked at startup."""

    task: str
    model: str
    device: str = "cpu"
    protocol_version: str = PROTOCOL_VERSION

    def validate(self) -> None:
        if self.task not in TASKS:
            raise AdapterConfigError(f"unknown task {self.task!r}")
        if self.protocol_version != PROTOCOL_VERSION:
            raise AdapterConfigError(
                f"protocol version {self.protocol_version!r} does not match "
                f"toolkit version {PROTOCOL_VERSION!r}"
            )

    def to_json_obj(self) -> dict:
        return {
            "task": self.task,
            "model": self.model,
            "device": self.device,
            "protocol_version": self.protocol_version,
        }


def serve(handler, stdin=None, stdout=None) -> int:
    """Run the request loop. handler(request) -> response dict; it may also
    return a list of responses for batching handlers. Raising maps to an
    error response for that request's id."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    requests = []
    for line in stdin:
        line = line.strip()
        if line:
            requests.append(json.loads(line))
    for request in requests:
        rid = request.get("id")
        try:
            response = handler(request)
        except Exception as exc:  # per-request failure, keep serving
            response = {"id": rid, "error": f"{type(exc).__name__}: {exc}"}
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
    stdout.flush()
    return 0


def serve_batched(batch_handler, stdin=None, stdout=None) -> int:
    """Like serve(), but the handler receives the whole request list and
    returns a list of responses (any order)."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    requests = []
    for line in stdin:
        line = line.strip()
        if line:
            requests.append(json.loads(line))
    responses = batch_handler(requests)
    for response in responses:
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
    stdout.flush()
    return 0
