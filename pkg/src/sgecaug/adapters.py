"""Client side of the external-model adapter protocol.

Adapters are external commands. Requests go to their stdin as one JSON
object per line; responses come back on stdout the same way, matched to
requests by id. Response order is free; missing ids are reported, never
fatal. Adapters that produce binary artifacts (TTS audio) write them into
an exchange directory and return the path.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

TASKS = ("reverse_gec", "tts", "asr", "embed", "grade_text", "grade_audio")

# Payload fields each task requires on a request, beyond id and task.
REQUIRED_FIELDS = {
    "reverse_gec": ("text",),
    "tts": ("text", "reference_audio", "exchange_dir"),
    "asr": ("audio",),
    "embed": ("audio",),
    "grade_text": ("text", "part"),
    "grade_audio": ("audio", "part"),
}


class AdapterError(RuntimeError):
    """Whole-batch transport failure (bad exit, timeout, protocol abuse)."""


@dataclass
class AdapterSpec:
    task: str
    command: list[str]
    timeout: float = 300.0
    max_batch: int = 64

    def identity(self) -> str:
        return json.dumps(
            {"task": self.task, "command": self.command}, sort_keys=True
        )

    def validate(self) -> None:
        if self.task not in TASKS:
            raise AdapterError(f"unknown task {self.task!r}")
        if not self.command:
            raise AdapterError("empty adapter invocation")

    @classmethod
    def from_json_obj(cls, obj: dict, task: Optional[str] = None) -> "AdapterSpec":
        spec = cls(
            task=task or obj["task"],
            command=list(obj["command"]),
            timeout=float(obj.get("timeout", 300.0)),
            max_batch=int(obj.get("max_batch", 64)),
        )
        spec.validate()
        return spec


@dataclass
class AdapterResult:
    responses: dict[str, dict] = field(default_factory=dict)
    missing: list[str] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)


def _check_requests(spec: AdapterSpec, requests: Sequence[dict]) -> None:
    seen = set()
    required = REQUIRED_FIELDS[spec.task]
    for request in requests:
        rid = request.get("id")
        if rid is None:
            raise AdapterError("request without id")
        if rid in seen:
            raise AdapterError(f"duplicate request id {rid!r}")
        seen.add(rid)
        for name in required:
            if name not in request:
                raise AdapterError(
                    f"request {rid!r} missing field {name!r} for task {spec.task}"
                )


def _run_batch(spec: AdapterSpec, batch: Sequence[dict], result: AdapterResult):
    payload = "".join(
        json.dumps(r, ensure_ascii=False) + "\n" for r in batch
    )
    try:
        proc = subprocess.run(
            spec.command,
            input=payload.encode("utf-8"),
            capture_output=True,
            timeout=spec.timeout,
        )
    except subprocess.TimeoutExpired:
        raise AdapterError(f"adapter timed out after {spec.timeout}s")
    except OSError as exc:
        raise AdapterError(f"adapter failed to launch: {exc}")
    if proc.returncode != 0:
        stderr = proc.stderr.decode("utf-8", "replace").strip()
        raise AdapterError(
            f"adapter exited with {proc.returncode}: {stderr[:500]}"
        )

    batch_ids = {r["id"] for r in batch}
    answered = set()
    for lineno, line in enumerate(
        proc.stdout.decode("utf-8").splitlines(), start=1
    ):
        line = line.strip()
        if not line:
            continue
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterError(f"malformed response line {lineno}: {exc}")
        rid = response.get("id")
        if rid is None:
            raise AdapterError(f"response line {lineno} has no id")
        if rid not in batch_ids:
            raise AdapterError(f"response id {rid!r} was never requested")
        if rid in answered:
            raise AdapterError(f"duplicate response id {rid!r}")
        answered.add(rid)
        if "error" in response:
            result.errors[rid] = str(response["error"])
        else:
            result.responses[rid] = response
    result.missing.extend(sorted(batch_ids - answered))


def invoke_adapter(spec: AdapterSpec, requests: Sequence[dict]) -> AdapterResult:
    """Send requests to an adapter in bounded batches and gather responses."""
    spec.validate()
    _check_requests(spec, requests)
    result = AdapterResult()
    requests = list(requests)
    for start in range(0, len(requests), spec.max_batch):
        _run_batch(spec, requests[start:start + spec.max_batch], result)
    return result


def write_vector_file(path, vector: Sequence[float], vec_id: str) -> None:
    """Per-utterance embedding file: id header line, one component per line."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"#id {vec_id}\n")
        for value in vector:
            fh.write(f"{value!r}\n")


def read_vector_file(path) -> tuple[str, list[float]]:
    path = Path(path)
    lines = path.read_text("utf-8").splitlines()
    if not lines or not lines[0].startswith("#id "):
        raise AdapterError(f"{path}: missing id header")
    vec_id = lines[0][4:].strip()
    vector = [float(line) for line in lines[1:] if line.strip()]
    return vec_id, vector
