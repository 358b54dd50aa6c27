"""Conformance-suite tests: every shipped mock adapter passes, and the
suite catches misbehaving adapters (dropped ids, unstable output)."""

import sys
import textwrap

import pytest

from sgecaug_adapters.cli import main
from sgecaug_adapters.conformance import render_report, run_conformance
from sgecaug_adapters.protocol import TASKS


def adapter_command(task, *extra):
    return [sys.executable, "-m", "sgecaug_adapters.cli", task, *extra]


@pytest.mark.parametrize("task", TASKS)
def test_mock_adapter_is_conformant(task):
    checks = run_conformance(adapter_command(task), task)
    failures = [c.render() for c in checks if not c.passed]
    assert not failures, failures


@pytest.mark.parametrize("task", TASKS)
def test_selfcheck_flag(task, capsys):
    assert main([task, "--selfcheck"]) == 0
    out = capsys.readouterr().out
    assert "CONFORMANT" in out
    assert "NOT CONFORMANT" not in out
    assert out.count("PASS") >= 5


def write_faulty_adapter(tmp_path, body):
    path = tmp_path / "faulty.py"
    path.write_text(
        textwrap.dedent(
            """\
            import json, sys
            requests = [json.loads(l) for l in sys.stdin if l.strip()]
            """
        )
        + textwrap.dedent(body),
        encoding="utf-8",
    )
    return [sys.executable, str(path)]


def test_suite_flags_dropped_ids(tmp_path):
    command = write_faulty_adapter(
        tmp_path,
        """\
        for r in requests:
            if r["id"] != "c001":
                print(json.dumps({"id": r["id"], "text": r["text"]}))
        """,
    )
    checks = {c.name: c for c in run_conformance(command, "reverse_gec")}
    assert not checks["every request id answered"].passed
    assert "c001" in checks["every request id answered"].detail


def test_suite_flags_nondeterminism(tmp_path):
    command = write_faulty_adapter(
        tmp_path,
        """\
        import time
        for r in requests:
            print(json.dumps({"id": r["id"], "text": [str(time.time_ns())]}))
        """,
    )
    checks = {c.name: c for c in run_conformance(command, "reverse_gec")}
    assert not checks["deterministic across repeat batches"].passed


def test_suite_flags_wrong_payload(tmp_path):
    command = write_faulty_adapter(
        tmp_path,
        """\
        for r in requests:
            print(json.dumps({"id": r["id"], "text": "not a token list"}))
        """,
    )
    checks = {c.name: c for c in run_conformance(command, "reverse_gec")}
    assert not checks["responses carry a valid 'text' result"].passed


def test_suite_tolerates_out_of_order_responses(tmp_path):
    command = write_faulty_adapter(
        tmp_path,
        """\
        for r in reversed(requests):
            print(json.dumps({"id": r["id"], "text": r["text"]}))
        """,
    )
    checks = run_conformance(command, "reverse_gec")
    assert all(c.passed for c in checks), [c.render() for c in checks]


def test_suite_reports_transport_failure(tmp_path):
    path = tmp_path / "crash.py"
    path.write_text("import sys; sys.exit(3)\n", encoding="utf-8")
    checks = run_conformance([sys.executable, str(path)], "reverse_gec")
    assert len(checks) == 1
    assert not checks[0].passed
    assert "NOT CONFORMANT" in render_report(checks)


def test_unavailable_backend_errors(capsys):
    assert main(["asr", "--backend", "whisper-small"]) == 2
    assert "unavailable" in capsys.readouterr().err
