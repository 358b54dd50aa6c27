"""Grammatical edit extraction, classification, and span-level scoring.

Edits are maximal runs of adjacent non-match alignment ops between a
source and a target token sequence. Classification is a self-contained
rule cascade over bundled closed-class lexicons and a verb-form table
(no POS tagger); scoring is span-level precision/recall/F0.5.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .alignment import MATCH, align_tokens
from .lexicons import (
    SLOT_BASE,
    SLOT_ING,
    SLOT_PARTICIPLE,
    SLOT_PAST,
    SLOT_THIRD,
    Lexicons,
    load_lexicons,
)

DET = "DET"
PREP = "PREP"
PRON = "PRON"
CONJ = "CONJ"
VERB_AGR = "VERB_AGR"
VERB_TENSE = "VERB_TENSE"
VERB_FORM = "VERB_FORM"
NOUN_NUM = "NOUN_NUM"
ADJ = "ADJ"
ADV = "ADV"
WORD_ORDER = "WORD_ORDER"
SPELL = "SPELL"
ORTH = "ORTH"
MISSING = "MISSING"
UNNECESSARY = "UNNECESSARY"
OTHER = "OTHER"

CATEGORIES = (
    DET, PREP, PRON, CONJ, VERB_AGR, VERB_TENSE, VERB_FORM, NOUN_NUM,
    ADJ, ADV, WORD_ORDER, SPELL, ORTH, MISSING, UNNECESSARY, OTHER,
)


@dataclass(frozen=True)
class GrammaticalEdit:
    ref_span: tuple[int, int]
    hyp_span: tuple[int, int]
    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    category: str

    def match_key(self) -> tuple:
        # TP matching is span + target tokens; category is deliberately
        # not part of the key.
        return (self.ref_span, self.target_tokens)


@dataclass(frozen=True)
class ScoreTriple:
    precision: float
    recall: float
    f_half: float


@dataclass(frozen=True)
class EditScore:
    triple: ScoreTriple
    tp: int
    fp: int
    fn: int


def f_half(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 1.25 * precision * recall / (0.25 * precision + recall)


def damerau_levenshtein(a: str, b: str) -> int:
    """Restricted Damerau-Levenshtein (optimal string alignment) distance."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return n or m
    rows = [list(range(m + 1))]
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = min(
                rows[i - 1][j - 1] + cost,
                rows[i - 1][j] + 1,
                cur[j - 1] + 1,
            )
            if (
                i > 1
                and j > 1
                and a[i - 1] == b[j - 2]
                and a[i - 2] == b[j - 1]
            ):
                best = min(best, rows[i - 2][j - 2] + 1)
            cur[j] = best
        rows.append(cur)
    return rows[n][m]


def _stems(word: str) -> set[str]:
    stems = {word}
    if word.endswith("ies") and len(word) > 4:
        stems.add(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        stems.add(word[:-2])
    if word.endswith("s") and len(word) > 2 and not word.endswith("ss"):
        stems.add(word[:-1])
    if word.endswith("ed") and len(word) > 3:
        stems.add(word[:-2])
        stems.add(word[:-1])
        if len(word) > 4 and word[-3] == word[-4]:
            stems.add(word[:-3])
    if word.endswith("ing") and len(word) > 4:
        stems.add(word[:-3])
        stems.add(word[:-3] + "e")
        if len(word) > 5 and word[-4] == word[-5]:
            stems.add(word[:-4])
    return stems


def _plural_variants(word: str) -> set[str]:
    variants = {word + "s", word + "es"}
    if word.endswith("y") and len(word) > 2:
        variants.add(word[:-1] + "ies")
    return variants


def _same_lemma_category(s: str, t: str, lex: Lexicons) -> Optional[str]:
    forms = lex.verb_forms
    if s in forms and t in forms and forms[s][0] == forms[t][0]:
        slots_s, slots_t = forms[s][1], forms[t][1]
        if (SLOT_BASE in slots_s and SLOT_THIRD in slots_t) or (
            SLOT_THIRD in slots_s and SLOT_BASE in slots_t
        ):
            return VERB_AGR
        if {SLOT_PAST, SLOT_PARTICIPLE} & (slots_s | slots_t):
            return VERB_TENSE
        if SLOT_ING in (slots_s | slots_t):
            return VERB_FORM
        return VERB_FORM
    if not (_stems(s) & _stems(t)):
        return None
    if t in _plural_variants(s) or s in _plural_variants(t):
        return NOUN_NUM
    if s.endswith("ed") or t.endswith("ed"):
        return VERB_TENSE
    if s.endswith("ing") or t.endswith("ing"):
        return VERB_FORM
    return None


def classify_edit(
    source_tokens: Sequence[str],
    target_tokens: Sequence[str],
    lex: Optional[Lexicons] = None,
) -> str:
    """Classify one edit. Deterministic first-match over the rule cascade."""
    if not source_tokens and not target_tokens:
        raise ValueError("cannot classify an empty edit")
    lex = lex or load_lexicons()
    src = [t.lower() for t in source_tokens]
    tgt = [t.lower() for t in target_tokens]

    if not src or not tgt:
        present = src or tgt
        if all(t in lex.determiners for t in present):
            return DET
        # A token absent from the target side was dropped (missing word);
        # one added on the target side is unnecessary.
        return MISSING if not tgt else UNNECESSARY

    if len(src) == 1 and len(tgt) == 1:
        s, t = src[0], tgt[0]
        for words, category in (
            (lex.determiners, DET),
            (lex.prepositions, PREP),
            (lex.pronouns, PRON),
            (lex.conjunctions, CONJ),
        ):
            if s in words and t in words:
                return category
        lemma_cat = _same_lemma_category(s, t, lex)
        if lemma_cat is not None:
            return lemma_cat

    if sorted(source_tokens) == sorted(target_tokens) and list(
        source_tokens
    ) != list(target_tokens):
        return WORD_ORDER

    if len(src) == 1 and len(tgt) == 1:
        s, t = src[0], tgt[0]
        in_lexicon = (s in lex.closed_class) or (t in lex.closed_class)
        # Distance on the raw tokens: a case-only pair folds to distance 0
        # and belongs to the orthography rule below, not here.
        if not in_lexicon and damerau_levenshtein(
            source_tokens[0], target_tokens[0]
        ) <= 2:
            return SPELL

    if src == tgt and list(source_tokens) != list(target_tokens):
        return ORTH

    return OTHER


def extract_edits(
    source: Sequence[str],
    target: Sequence[str],
    lex: Optional[Lexicons] = None,
) -> list[GrammaticalEdit]:
    """Extract classified edits; empty iff the sequences are equal."""
    lex = lex or load_lexicons()
    script = align_tokens(source, target, fold_case=False)
    edits: list[GrammaticalEdit] = []
    run_start: Optional[tuple[int, int]] = None
    rpos = hpos = 0

    def close_run():
        nonlocal run_start
        if run_start is None:
            return
        r0, h0 = run_start
        src = tuple(source[r0:rpos])
        tgt = tuple(target[h0:hpos])
        edits.append(
            GrammaticalEdit(
                ref_span=(r0, rpos),
                hyp_span=(h0, hpos),
                source_tokens=src,
                target_tokens=tgt,
                category=classify_edit(src, tgt, lex),
            )
        )
        run_start = None

    for op in script.ops:
        if op.kind == MATCH:
            close_run()
        elif run_start is None:
            run_start = (rpos, hpos)
        if op.ref_index is not None:
            rpos += 1
        if op.hyp_index is not None:
            hpos += 1
    close_run()
    return edits


def apply_edits(
    source: Sequence[str], edits: Iterable[GrammaticalEdit]
) -> list[str]:
    """Apply edits (non-overlapping, against source) right to left."""
    out = list(source)
    for edit in sorted(edits, key=lambda e: e.ref_span[0], reverse=True):
        a, b = edit.ref_span
        out[a:b] = list(edit.target_tokens)
    return out


def score_edits(
    hypothesis_edits: Iterable[GrammaticalEdit],
    reference_edits: Iterable[GrammaticalEdit],
) -> EditScore:
    """Span-level P/R/F0.5 with TP = identical ref_span + target tokens."""
    hyp_keys = {e.match_key() for e in hypothesis_edits}
    ref_keys = {e.match_key() for e in reference_edits}
    tp = len(hyp_keys & ref_keys)
    fp = len(hyp_keys) - tp
    fn = len(ref_keys) - tp
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    return EditScore(
        triple=ScoreTriple(precision, recall, f_half(precision, recall)),
        tp=tp,
        fp=fp,
        fn=fn,
    )


def error_distribution(
    edit_sets: Iterable[Iterable[GrammaticalEdit]],
) -> dict[str, float]:
    """Normalized category frequencies over all edits; {} for no edits."""
    counts = Counter(e.category for edits in edit_sets for e in edits)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {cat: counts[cat] / total for cat in sorted(counts)}


def new_error_rate(records, lex: Optional[Lexicons] = None) -> float:
    """Fraction of records whose generated text carries an edit not present
    in the original text, both extracted against text_gec."""
    lex = lex or load_lexicons()
    records = list(records)
    if not records:
        return 0.0
    novel = 0
    for record in records:
        for name in ("text_gec", "text_original", "text_generated"):
            if getattr(record, name) is None:
                raise ValueError(f"record {record.id!r} missing {name}")
        ref_keys = {
            e.match_key()
            for e in extract_edits(record.text_gec, record.text_original, lex)
        }
        gen_edits = extract_edits(record.text_gec, record.text_generated, lex)
        if any(e.match_key() not in ref_keys for e in gen_edits):
            novel += 1
    return novel / len(records)
