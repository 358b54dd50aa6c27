"""Deterministic mock backends, one per pipeline task.

The reverse-GEC mock delegates to the toolkit's own rule injector through
its command-line interface, so its output is byte-identical to in-process
injection at the same seed. The TTS/ASR pair exchanges token lists through
the audio path, so a TTS-then-ASR round trip has zero word error rate. The
embedder returns the same unit vector for the original and generated sides
of an id, so every speaker distance is exactly zero.
"""

from __future__ import annotations

import hashlib
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path


def _unit_fraction(text: str) -> float:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2 ** 64


def reverse_gec_batch(requests: list[dict], seed: int = 0) -> list[dict]:
    """Corrupt each request's text with `sgecaug inject` at the given seed."""
    if not requests:
        return []
    with tempfile.TemporaryDirectory(prefix="sgecaug-adapter-") as workdir:
        workdir = Path(workdir)
        manifest_path = workdir / "batch.jsonl"
        lines = [json.dumps({"schema_version": "1", "corpus": "adapter", "split": "batch"})]
        for request in requests:
            lines.append(
                json.dumps(
                    {
                        "id": request["id"],
                        "speaker_id": "adapter",
                        "part": 1,
                        "text_gec": list(request["text"]),
                    },
                    ensure_ascii=False,
                )
            )
        manifest_path.write_text("".join(line + "\n" for line in lines), "utf-8")
        out_dir = workdir / "out"
        proc = subprocess.run(
            [
                sys.executable, "-m", "sgecaug.cli", "inject",
                "--manifest", str(manifest_path),
                "--out", str(out_dir),
                "--seed", str(seed),
                "--timestamp", "adapter",
            ],
            capture_output=True,
        )
        if proc.returncode != 0:
            raise RuntimeError(
                "sgecaug inject failed: "
                + proc.stderr.decode("utf-8", "replace").strip()[:500]
            )
        generated = {}
        with (out_dir / "manifest.jsonl").open("r", encoding="utf-8") as fh:
            next(fh)  # header
            for line in fh:
                record = json.loads(line)
                generated[record["id"]] = record["text_generated"]
    return [{"id": r["id"], "text": generated[r["id"]]} for r in requests]


def tts_one(request: dict) -> dict:
    path = Path(request["exchange_dir"]) / f"{request['id']}.wav"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(list(request["text"]), ensure_ascii=False), "utf-8")
    return {"id": request["id"], "audio": str(path)}


def asr_one(request: dict) -> dict:
    tokens = json.loads(Path(request["audio"]).read_text("utf-8"))
    return {"id": request["id"], "text": tokens}


def embed_one(request: dict) -> dict:
    base_id, _, _side = str(request["id"]).partition("#")
    angle = _unit_fraction(base_id) * 2 * math.pi
    return {"id": request["id"], "vector": [math.cos(angle), math.sin(angle)]}


def grade_one(request: dict, task: str, model: str = "mock") -> dict:
    key = f"{model}:{task}:{request['id']}"
    return {"id": request["id"], "score": 2.0 + 4.0 * _unit_fraction(key)}
