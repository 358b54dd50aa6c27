"""Disfluency removal and position-preserving reinsertion.

Removed spans are remembered as anchors in fluent-boundary coordinates;
reinsertion aligns the fluent text against a (possibly modified) generated
text and projects each anchor boundary through the alignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alignment import align_tokens, project_anchor
from .manifest import DisfluencySpan, UtteranceRecord, validate_record


@dataclass(frozen=True)
class Anchor:
    fluent_boundary: int
    kind: str
    surface_tokens: tuple[str, ...]


@dataclass
class AnchorMap:
    anchors: list[Anchor]

    def __iter__(self):
        return iter(self.anchors)

    def __len__(self):
        return len(self.anchors)


def strip_disfluencies(
    text_original: Sequence[str], spans: Sequence[DisfluencySpan]
) -> tuple[list[str], AnchorMap]:
    """Remove annotated spans, keeping an anchor at the fluent boundary
    where each span's first token stood."""
    record = UtteranceRecord(
        id="_", speaker_id="_", part=1,
        text_original=list(text_original), disfluencies=list(spans),
    )
    violations = validate_record(record)
    if violations:
        raise ValueError(f"invalid annotation: {violations}")
    fluent: list[str] = []
    anchors: list[Anchor] = []
    removed = 0
    pos = 0
    for span in spans:
        fluent.extend(text_original[pos:span.start])
        anchors.append(
            Anchor(
                fluent_boundary=span.start - removed,
                kind=span.kind,
                surface_tokens=tuple(text_original[span.start:span.end]),
            )
        )
        removed += span.end - span.start
        pos = span.end
    fluent.extend(text_original[pos:])
    return fluent, AnchorMap(anchors)


def reinsert_disfluencies(
    fluent_source: Sequence[str],
    anchors: AnchorMap,
    generated: Sequence[str],
) -> list[str]:
    """Insert anchor tokens into generated text at projected boundaries.

    Boundaries are projected through a case-folded alignment of
    fluent_source against generated; anchors are applied left to right and
    equal boundaries keep their original relative order. The generated
    tokens always survive as a subsequence of the output.
    """
    script = align_tokens(fluent_source, generated, fold_case=True)
    out: list[str] = []
    consumed = 0
    for anchor in anchors:
        boundary = project_anchor(script, anchor.fluent_boundary)
        out.extend(generated[consumed:boundary])
        out.extend(anchor.surface_tokens)
        consumed = boundary
    out.extend(generated[consumed:])
    return out


def repetition_mismatches(
    anchors: AnchorMap,
    generated: Sequence[str],
    output: Sequence[str],
) -> list[int]:
    """Indices of repetition anchors whose repeated token no longer exists
    in the generated text (the duplicated word was edited away)."""
    generated_folded = {t.lower() for t in generated}
    flagged = []
    for i, anchor in enumerate(anchors):
        if anchor.kind != "repetition":
            continue
        if not all(t.lower() in generated_folded for t in anchor.surface_tokens):
            flagged.append(i)
    return flagged
