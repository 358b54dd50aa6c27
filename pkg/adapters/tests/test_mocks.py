"""Behavioral tests for the mock backends, exercised end to end through
the protocol client from the main toolkit."""

import sys

from sgecaug.adapters import AdapterSpec, invoke_adapter
from sgecaug.inject import InjectionConfig, inject_errors, utterance_seed
from sgecaug.metrics import cosine_distance, wer


def adapter_command(task, *extra):
    return [sys.executable, "-m", "sgecaug_adapters.cli", task, *extra]


def test_reverse_gec_matches_in_process_injection():
    texts = {
        "r0": ["she", "go", "to", "the", "school"],
        "r1": ["they", "want", "a", "beautiful", "garden"],
        "r2": ["i", "like", "this", "quiet", "museum", "and", "we", "visit", "it"],
    }
    spec = AdapterSpec(
        task="reverse_gec",
        command=adapter_command("reverse_gec", "--seed", "42"),
    )
    result = invoke_adapter(
        spec,
        [{"id": rid, "task": "reverse_gec", "text": t} for rid, t in texts.items()],
    )
    assert result.missing == [] and result.errors == {}
    config = InjectionConfig(seed=42)
    for rid, tokens in texts.items():
        expected = inject_errors(tokens, config, utterance_seed(42, rid)).text
        assert result.responses[rid]["text"] == expected


def test_tts_asr_round_trip_has_zero_wer(tmp_path):
    tokens = ["er", "I", "goes", "to", "school"]
    tts = AdapterSpec(task="tts", command=adapter_command("tts"))
    made = invoke_adapter(
        tts,
        [{
            "id": "u0", "task": "tts", "text": tokens,
            "reference_audio": "orig.wav", "exchange_dir": str(tmp_path),
        }],
    )
    audio = made.responses["u0"]["audio"]

    asr = AdapterSpec(task="asr", command=adapter_command("asr"))
    heard = invoke_adapter(asr, [{"id": "u0", "task": "asr", "audio": audio}])
    transcript = heard.responses["u0"]["text"]
    assert wer(tokens, transcript).errors == 0


def test_embedder_gives_zero_distance_per_id(tmp_path):
    sample = tmp_path / "a.wav"
    sample.write_text("[]", encoding="utf-8")
    spec = AdapterSpec(task="embed", command=adapter_command("embed"))
    requests = []
    for i in range(10):
        requests.append({"id": f"u{i}#orig", "task": "embed", "audio": str(sample)})
        requests.append({"id": f"u{i}#gen", "task": "embed", "audio": str(sample)})
    result = invoke_adapter(spec, requests)
    distances = [
        cosine_distance(
            result.responses[f"u{i}#orig"]["vector"],
            result.responses[f"u{i}#gen"]["vector"],
        )
        for i in range(10)
    ]
    assert all(abs(d) <= 1e-12 for d in distances)
    assert sum(distances) / len(distances) <= 1e-12  # AUC over the batch


def test_graders_are_bounded_and_stable(tmp_path):
    sample = tmp_path / "a.wav"
    sample.write_text("[]", encoding="utf-8")
    for task, payload in (
        ("grade_text", {"text": ["hello"], "part": 2}),
        ("grade_audio", {"audio": str(sample), "part": 2}),
    ):
        spec = AdapterSpec(task=task, command=adapter_command(task))
        requests = [{"id": f"u{i}", "task": task, **payload} for i in range(5)]
        first = invoke_adapter(spec, requests)
        second = invoke_adapter(spec, requests)
        assert first.responses == second.responses
        for response in first.responses.values():
            assert 2.0 <= response["score"] <= 6.0


def test_per_request_failure_is_isolated(tmp_path):
    # One unreadable audio path fails its own id only.
    good = tmp_path / "good.wav"
    good.write_text("[\"ok\"]", encoding="utf-8")
    spec = AdapterSpec(task="asr", command=adapter_command("asr"))
    result = invoke_adapter(
        spec,
        [
            {"id": "good", "task": "asr", "audio": str(good)},
            {"id": "bad", "task": "asr", "audio": str(tmp_path / "missing.wav")},
        ],
    )
    assert result.responses["good"]["text"] == ["ok"]
    assert "bad" in result.errors
