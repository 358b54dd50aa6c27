"""Protocol conformance suite.

Runs an adapter command through the toolkit's own protocol client
(sgecaug.adapters.invoke_adapter), so passing here means the adapter works
with the real consumer: ids matched regardless of response order, nothing
dropped, nothing invented, and repeat batches deterministic.
"""

from __future__ import annotations

import json
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from sgecaug.adapters import AdapterError, AdapterSpec, invoke_adapter

from .protocol import TASKS

SAMPLE_TEXT = ["she", "go", "to", "the", "school", "every", "day"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        suffix = f"  ({self.detail})" if self.detail and not self.passed else ""
        return f"{status}  {self.name}{suffix}"


def _result_field(task: str) -> tuple[str, type]:
    return {
        "reverse_gec": ("text", list),
        "tts": ("audio", str),
        "asr": ("text", list),
        "embed": ("vector", list),
        "grade_text": ("score", float),
        "grade_audio": ("score", float),
    }[task]


def sample_requests(task: str, workdir: Path, n: int = 5,
                    audio_sample: Optional[str] = None) -> list[dict]:
    """Valid requests for one task. Audio-consuming tasks get a token-list
    exchange file unless a real audio sample path is supplied."""
    if audio_sample is None and task in ("asr", "embed", "grade_audio"):
        sample = workdir / "sample.wav"
        sample.write_text(json.dumps(SAMPLE_TEXT), "utf-8")
        audio_sample = str(sample)
    requests = []
    for i in range(n):
        rid = f"c{i:03d}"
        if task == "reverse_gec":
            payload = {"text": SAMPLE_TEXT}
        elif task == "tts":
            exchange = workdir / "exchange"
            exchange.mkdir(exist_ok=True)
            payload = {
                "text": SAMPLE_TEXT,
                "reference_audio": audio_sample or "reference.wav",
                "exchange_dir": str(exchange),
            }
        elif task in ("asr", "embed"):
            payload = {"audio": audio_sample}
        elif task == "grade_text":
            payload = {"text": SAMPLE_TEXT, "part": 1}
        elif task == "grade_audio":
            payload = {"audio": audio_sample, "part": 1}
        else:
            raise ValueError(f"unknown task {task!r}")
        requests.append({"id": rid, "task": task, **payload})
    return requests


def run_conformance(command: list[str], task: str,
                    audio_sample: Optional[str] = None) -> list[CheckResult]:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    checks: list[CheckResult] = []
    with tempfile.TemporaryDirectory(prefix="conformance-") as workdir:
        workdir = Path(workdir)
        requests = sample_requests(task, workdir, audio_sample=audio_sample)
        spec = AdapterSpec(task=task, command=list(command))

        try:
            first = invoke_adapter(spec, requests)
            protocol_ok, protocol_detail = True, ""
        except AdapterError as exc:
            checks.append(CheckResult("protocol transport", False, str(exc)))
            return checks
        checks.append(CheckResult("protocol transport", protocol_ok, protocol_detail))

        expected_ids = [r["id"] for r in requests]
        missing = sorted(set(first.missing) | set(first.errors))
        checks.append(
            CheckResult(
                "every request id answered",
                not missing,
                f"unanswered or failed: {missing}" if missing else "",
            )
        )
        checks.append(
            CheckResult(
                "no invented response ids",
                set(first.responses) <= set(expected_ids),
                "",
            )
        )

        field, field_type = _result_field(task)
        accepted = (int, float) if field_type is float else field_type
        bad = [
            rid
            for rid, response in first.responses.items()
            if not isinstance(response.get(field), accepted)
        ]
        checks.append(
            CheckResult(
                f"responses carry a valid {field!r} result",
                not bad,
                f"bad payloads for: {sorted(bad)}" if bad else "",
            )
        )

        try:
            second = invoke_adapter(spec, requests)
            deterministic = second.responses == first.responses
            detail = "" if deterministic else "repeat batch differed"
        except AdapterError as exc:
            deterministic, detail = False, str(exc)
        checks.append(CheckResult("deterministic across repeat batches", deterministic, detail))

        try:
            split_spec = AdapterSpec(task=task, command=list(command), max_batch=2)
            split = invoke_adapter(split_spec, requests)
            same = split.responses == first.responses and not split.missing
            detail = "" if same else "split batches differed"
        except AdapterError as exc:
            same, detail = False, str(exc)
        checks.append(CheckResult("split batches match one batch", same, detail))
    return checks


def render_report(checks: list[CheckResult]) -> str:
    lines = [c.render() for c in checks]
    verdict = "CONFORMANT" if all(c.passed for c in checks) else "NOT CONFORMANT"
    lines.append(verdict)
    return "\n".join(lines) + "\n"
