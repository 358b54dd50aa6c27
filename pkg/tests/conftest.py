import random
import sys
from pathlib import Path

import pytest

from sgecaug.lexicons import load_lexicons
from sgecaug.manifest import Manifest, ManifestHeader, UtteranceRecord

MOCK_ADAPTER = Path(__file__).parent / "mock_adapter.py"

# One line per acceptance criterion, filled in by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def adapter_command(*extra_args: str) -> list[str]:
    return [sys.executable, str(MOCK_ADAPTER), *extra_args]


@pytest.fixture(scope="session")
def lex():
    return load_lexicons()


# Word pools for synthetic utterances; every injection rule has sites.
NOUNS = [
    "school", "teacher", "book", "friend", "house", "city", "garden",
    "picture", "question", "answer", "lesson", "family", "problem",
    "computer", "holiday", "market", "station", "window", "kitchen",
    "mountain",
]
VERBS = ["go", "make", "take", "see", "like", "want", "play", "study", "watch", "visit"]
ADJECTIVES = ["big", "small", "nice", "happy", "difficult", "beautiful", "cheap", "quiet"]
DETERMINERS = ["the", "a", "this", "my", "some"]
PREPOSITIONS = ["in", "on", "at", "to", "with", "from"]
PRONOUNS = ["i", "you", "he", "she", "we", "they"]
CONJUNCTIONS = ["and", "but", "because", "so"]
HESITATIONS = ["er", "erm", "um", "uh"]


def synthetic_sentence(rng: random.Random) -> list[str]:
    """Clean tokenized sentence with closed-class, verb, and noun sites."""
    tokens = [
        rng.choice(PRONOUNS),
        rng.choice(VERBS),
        rng.choice(PREPOSITIONS),
        rng.choice(DETERMINERS),
        rng.choice(ADJECTIVES),
        rng.choice(NOUNS),
    ]
    for _ in range(rng.randrange(0, 3)):
        tokens += [
            rng.choice(CONJUNCTIONS),
            rng.choice(PRONOUNS),
            rng.choice(VERBS),
            rng.choice(DETERMINERS),
            rng.choice(NOUNS),
        ]
    return tokens


def synthetic_manifest(n: int, seed: int = 7, with_audio: bool = False) -> Manifest:
    rng = random.Random(seed)
    records = []
    for i in range(n):
        clean = synthetic_sentence(rng)
        record = UtteranceRecord(
            id=f"u{i:05d}",
            speaker_id=f"spk{i % 50:03d}",
            part=rng.choice([1, 2, 3, 4, 5]),
            text_original=list(clean),
            text_gec=list(clean),
            score_reference=round(rng.uniform(2.0, 6.0), 1),
        )
        if with_audio:
            record.audio_original = f"audio/{record.id}.wav"
        records.append(record)
    return Manifest(header=ManifestHeader(corpus="synthetic", split="dev"), records=records)
