"""Bundled closed-class word lists and a small verb-form table.

The data files live in sgecaug/data: one lower-case word per line for the
closed-class lists, and tab-separated rows (base, 3rd person, past, -ing,
participle) for verbs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

SLOT_BASE = "base"
SLOT_THIRD = "third"
SLOT_PAST = "past"
SLOT_ING = "ing"
SLOT_PARTICIPLE = "participle"

_VERB_SLOTS = [SLOT_BASE, SLOT_THIRD, SLOT_PAST, SLOT_ING, SLOT_PARTICIPLE]


def _read_words(name: str) -> frozenset[str]:
    text = resources.files("sgecaug.data").joinpath(name).read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class VerbEntry:
    base: str
    third: str
    past: str
    ing: str
    participle: str

    def form(self, slot: str) -> str:
        return getattr(self, slot)


@dataclass(frozen=True)
class Lexicons:
    determiners: frozenset[str]
    prepositions: frozenset[str]
    pronouns: frozenset[str]
    conjunctions: frozenset[str]
    verbs: tuple[VerbEntry, ...]
    # form -> (base, {slots it fills}); a surface form can fill several slots
    verb_forms: dict[str, tuple[str, frozenset[str]]] = field(hash=False, compare=False, default_factory=dict)
    verb_by_base: dict[str, VerbEntry] = field(hash=False, compare=False, default_factory=dict)

    @property
    def closed_class(self) -> frozenset[str]:
        return self.determiners | self.prepositions | self.pronouns | self.conjunctions

    def is_closed_class(self, token: str) -> bool:
        return token.lower() in self.closed_class

    def is_verb_form(self, token: str) -> bool:
        return token.lower() in self.verb_forms


@lru_cache(maxsize=1)
def load_lexicons() -> Lexicons:
    verbs = []
    text = resources.files("sgecaug.data").joinpath("verbs.tsv").read_text("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"bad verbs.tsv row: {line!r}")
        verbs.append(VerbEntry(*parts))
    verb_forms: dict[str, tuple[str, set[str]]] = {}
    for entry in verbs:
        for slot in _VERB_SLOTS:
            form = entry.form(slot)
            base, slots = verb_forms.setdefault(form, (entry.base, set()))
            slots.add(slot)
    frozen = {
        form: (base, frozenset(slots)) for form, (base, slots) in verb_forms.items()
    }
    return Lexicons(
        determiners=_read_words("determiners.txt"),
        prepositions=_read_words("prepositions.txt"),
        pronouns=_read_words("pronouns.txt"),
        conjunctions=_read_words("conjunctions.txt"),
        verbs=tuple(verbs),
        verb_forms=frozen,
        verb_by_base={entry.base: entry for entry in verbs},
    )
