"""Corpus data model and line-delimited JSON manifest I/O.

A manifest file is UTF-8, one JSON object per line. The first line is a
header record; every following line is one utterance record with fields
serialized in a canonical order so that read/write round-trips are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

SCHEMA_VERSION = "1"

VALID_PARTS = {1, 2, 3, 4, 5}
SCORE_MIN = 2.0
SCORE_MAX = 6.0

DISFLUENCY_KINDS = {"hesitation", "repetition", "false_start", "incomplete"}

# Canonical serialization order for record fields.
FIELD_ORDER = [
    "id",
    "speaker_id",
    "part",
    "audio_original",
    "text_original",
    "disfluencies",
    "text_fluent",
    "text_gec",
    "text_generated",
    "text_generated_disfluent",
    "audio_generated",
    "score_reference",
    "provenance",
]

PROVENANCE_KEYS = ["stage", "tool_version", "seed", "timestamp"]


class ManifestError(ValueError):
    """Raised on malformed manifest files or invalid manifests."""


@dataclass(frozen=True)
class DisfluencySpan:
    start: int
    end: int  # exclusive
    kind: str

    def to_json(self):
        return [self.start, self.end, self.kind]

    @classmethod
    def from_json(cls, obj) -> "DisfluencySpan":
        if not isinstance(obj, list) or len(obj) != 3:
            raise ManifestError(f"bad disfluency span: {obj!r}")
        return cls(int(obj[0]), int(obj[1]), str(obj[2]))


@dataclass
class UtteranceRecord:
    id: str
    speaker_id: str
    part: int
    audio_original: Optional[str] = None
    text_original: Optional[list[str]] = None
    disfluencies: Optional[list[DisfluencySpan]] = None
    text_fluent: Optional[list[str]] = None
    text_gec: Optional[list[str]] = None
    text_generated: Optional[list[str]] = None
    text_generated_disfluent: Optional[list[str]] = None
    audio_generated: Optional[str] = None
    score_reference: Optional[float] = None
    provenance: list[dict] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        obj = {}
        for name in FIELD_ORDER:
            value = getattr(self, name)
            if name == "provenance":
                if value:
                    obj[name] = [
                        {k: stamp[k] for k in PROVENANCE_KEYS if k in stamp}
                        for stamp in value
                    ]
            elif name == "disfluencies":
                if value is not None:
                    obj[name] = [span.to_json() for span in value]
            elif value is not None:
                obj[name] = value
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "UtteranceRecord":
        if not isinstance(obj, dict):
            raise ManifestError("record is not an object")
        for required in ("id", "speaker_id", "part"):
            if required not in obj:
                raise ManifestError(f"record missing field {required!r}")
        unknown = set(obj) - set(FIELD_ORDER)
        if unknown:
            raise ManifestError(f"unknown record fields: {sorted(unknown)}")
        disfluencies = obj.get("disfluencies")
        if disfluencies is not None:
            disfluencies = [DisfluencySpan.from_json(s) for s in disfluencies]
        return cls(
            id=str(obj["id"]),
            speaker_id=str(obj["speaker_id"]),
            part=int(obj["part"]),
            audio_original=obj.get("audio_original"),
            text_original=obj.get("text_original"),
            disfluencies=disfluencies,
            text_fluent=obj.get("text_fluent"),
            text_gec=obj.get("text_gec"),
            text_generated=obj.get("text_generated"),
            text_generated_disfluent=obj.get("text_generated_disfluent"),
            audio_generated=obj.get("audio_generated"),
            score_reference=obj.get("score_reference"),
            provenance=list(obj.get("provenance") or []),
        )


@dataclass
class ManifestHeader:
    schema_version: str = SCHEMA_VERSION
    corpus: str = ""
    split: str = ""

    def to_json_obj(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "corpus": self.corpus,
            "split": self.split,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ManifestHeader":
        if "schema_version" not in obj:
            raise ManifestError("header missing schema_version")
        version = str(obj["schema_version"])
        if version != SCHEMA_VERSION:
            raise ManifestError(f"unknown schema version {version!r}")
        return cls(version, str(obj.get("corpus", "")), str(obj.get("split", "")))


@dataclass
class Manifest:
    header: ManifestHeader = field(default_factory=ManifestHeader)
    records: list[UtteranceRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def validate_record(record: UtteranceRecord) -> list[str]:
    """Return a list of invariant violations; empty means the record is valid.

    Violations are data, not exceptions: callers decide how strict to be.
    """
    violations = []
    if record.part not in VALID_PARTS:
        violations.append(f"part: {record.part} not in {sorted(VALID_PARTS)}")
    score = record.score_reference
    if score is not None and not (SCORE_MIN <= score <= SCORE_MAX):
        violations.append(
            f"score_reference: {score} out of [{SCORE_MIN},{SCORE_MAX}]"
        )
    if record.disfluencies is not None:
        if record.text_original is None:
            violations.append("disfluencies: present without text_original")
        else:
            n = len(record.text_original)
            prev_end = 0
            for i, span in enumerate(record.disfluencies):
                if span.kind not in DISFLUENCY_KINDS:
                    violations.append(
                        f"disfluencies[{i}]: unknown kind {span.kind!r}"
                    )
                if not (0 <= span.start < span.end <= n):
                    violations.append(
                        f"disfluencies[{i}]: span ({span.start},{span.end}) "
                        f"outside token range [0,{n}]"
                    )
                elif span.start < prev_end:
                    violations.append(
                        f"disfluencies[{i}]: overlaps or unsorted at "
                        f"({span.start},{span.end})"
                    )
                prev_end = max(prev_end, span.end)
    return violations


def read_manifest(path) -> Manifest:
    """Read a line-delimited manifest. Rejects duplicate ids and bad lines."""
    path = Path(path)
    header = None
    records = []
    seen: dict[str, int] = {}
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}: malformed line {lineno}: {exc}")
            if header is None:
                header = ManifestHeader.from_json_obj(obj)
                continue
            record = UtteranceRecord.from_json_obj(obj)
            if record.id in seen:
                raise ManifestError(
                    f"{path}: duplicate id {record.id!r} on lines "
                    f"{seen[record.id]} and {lineno}"
                )
            seen[record.id] = lineno
            records.append(record)
    if header is None:
        raise ManifestError(f"{path}: empty file, missing header")
    return Manifest(header=header, records=records)


def write_manifest(manifest: Manifest, path) -> None:
    """Write a manifest in canonical form (header line, one record per line)."""
    ids = set()
    for record in manifest.records:
        if record.id in ids:
            raise ManifestError(f"duplicate id {record.id!r} in manifest")
        ids.add(record.id)
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        fh.write(_dumps(manifest.header.to_json_obj()) + "\n")
        for record in manifest.records:
            fh.write(_dumps(record.to_json_obj()) + "\n")
    tmp.replace(path)


def manifest_bytes(manifest: Manifest) -> bytes:
    """Canonical serialization, as written by write_manifest."""
    lines = [_dumps(manifest.header.to_json_obj())]
    lines.extend(_dumps(r.to_json_obj()) for r in manifest.records)
    return ("\n".join(lines) + "\n").encode("utf-8")
