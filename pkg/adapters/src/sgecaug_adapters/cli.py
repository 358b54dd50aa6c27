"""Adapter entry point.

    sgecaug-adapter TASK [--backend mock] [--seed N]

reads protocol requests from stdin and writes responses to stdout.
`--info` prints the adapter's self-description instead; `--selfcheck`
runs the protocol conformance suite against this very command and exits
nonzero if any check fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import mock
from .conformance import render_report, run_conformance
from .protocol import TASKS, AdapterManifest, serve, serve_batched

# Backends that failed to import (missing optional extras) map to the
# import error message so the CLI can explain itself.
REAL_BACKENDS: dict[str, str] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgecaug-adapter",
        description="Serve one pipeline task over the stdin/stdout adapter protocol",
    )
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--backend", default="mock",
                        help="model backend (only 'mock' ships by default)")
    parser.add_argument("--seed", type=int, default=0,
                        help="injection seed for the reverse_gec mock")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--info", action="store_true",
                        help="print the adapter manifest and exit")
    parser.add_argument("--selfcheck", action="store_true",
                        help="run the conformance suite against this adapter")
    return parser


def _self_command(args) -> list[str]:
    command = [sys.executable, "-m", "sgecaug_adapters.cli", args.task,
               "--backend", args.backend, "--device", args.device]
    if args.task == "reverse_gec":
        command += ["--seed", str(args.seed)]
    return command


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    manifest = AdapterManifest(
        task=args.task, model=args.backend, device=args.device
    )
    manifest.validate()

    if args.info:
        print(json.dumps(manifest.to_json_obj(), indent=2))
        return 0

    if args.selfcheck:
        checks = run_conformance(_self_command(args), args.task)
        sys.stdout.write(render_report(checks))
        return 0 if all(c.passed for c in checks) else 1

    if args.backend != "mock":
        reason = REAL_BACKENDS.get(args.backend, "not installed")
        print(
            f"backend {args.backend!r} is unavailable: {reason}",
            file=sys.stderr,
        )
        return 2

    if args.task == "reverse_gec":
        return serve_batched(lambda reqs: mock.reverse_gec_batch(reqs, seed=args.seed))
    handlers = {
        "tts": mock.tts_one,
        "asr": mock.asr_one,
        "embed": mock.embed_one,
        "grade_text": lambda r: mock.grade_one(r, "grade_text"),
        "grade_audio": lambda r: mock.grade_one(r, "grade_audio"),
    }
    return serve(handlers[args.task])


if __name__ == "__main__":
    sys.exit(main())
