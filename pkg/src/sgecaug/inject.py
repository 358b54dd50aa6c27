"""Rule-based error injection (reverse-GEC surrogate) and its calibration.

Each enabled error category has one corruption rule. Injection is fully
deterministic given (tokens, config, per-utterance seed); per-utterance
seeds are a stable hash of the config seed and the utterance id, so
subsets of a corpus reproduce identically in any batch order.
"""

from __future__ import annotations

import dataclasses
import hashlib
import random
import string
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import edits as editlab
from .edits import (
    DET, MISSING, NOUN_NUM, PREP, PRON, SPELL, UNNECESSARY,
    VERB_AGR, VERB_TENSE, WORD_ORDER,
    GrammaticalEdit, extract_edits, new_error_rate,
)
from .lexicons import SLOT_BASE, SLOT_PAST, SLOT_THIRD, Lexicons, load_lexicons

MAX_CATEGORY_RESAMPLES = 8

DEFAULT_ERRORS_PER_UTTERANCE = {0: 0.10, 1: 0.45, 2: 0.30, 3: 0.10, 4: 0.05}

DEFAULT_TARGET_DISTRIBUTION = {
    DET: 0.20,
    PREP: 0.15,
    NOUN_NUM: 0.15,
    PRON: 0.10,
    VERB_AGR: 0.10,
    VERB_TENSE: 0.10,
    SPELL: 0.10,
    WORD_ORDER: 0.05,
    MISSING: 0.025,
    UNNECESSARY: 0.025,
}

# Swap pools kept to unambiguous members of each closed class.
_DET_SWAPS = ["a", "an", "the", "this", "that", "these", "those"]
_PREP_SWAPS = ["in", "on", "at", "to", "of", "for", "with", "from", "by", "about"]
_PRON_SWAPS = ["i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them"]


class InjectionError(ValueError):
    pass


@dataclass
class InjectionConfig:
    target_distribution: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_TARGET_DISTRIBUTION)
    )
    errors_per_utterance: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_ERRORS_PER_UTTERANCE)
    )
    seed: int = 0
    rule_toggles: dict[str, bool] = field(default_factory=dict)

    def enabled_categories(self) -> list[str]:
        return sorted(
            cat
            for cat in self.target_distribution
            if self.rule_toggles.get(cat, True)
        )

    def validate(self) -> None:
        for cat, prob in self.target_distribution.items():
            if cat not in RULES:
                raise InjectionError(f"no corruption rule for category {cat!r}")
            if prob < 0:
                raise InjectionError(f"negative probability for {cat!r}")
        if abs(sum(self.target_distribution.values()) - 1.0) > 1e-9:
            raise InjectionError("target_distribution does not sum to 1")
        for count, prob in self.errors_per_utterance.items():
            if count not in (0, 1, 2, 3, 4):
                raise InjectionError(f"error count {count} outside 0..4")
            if prob < 0:
                raise InjectionError(f"negative probability for count {count}")
        if abs(sum(self.errors_per_utterance.values()) - 1.0) > 1e-9:
            raise InjectionError("errors_per_utterance does not sum to 1")
        enabled = [
            c for c in self.target_distribution if self.rule_toggles.get(c, True)
        ]
        if not enabled and any(
            c > 0 for c in self.errors_per_utterance if c > 0
        ):
            raise InjectionError("all rules disabled")

    def to_json_obj(self) -> dict:
        return {
            "target_distribution": dict(sorted(self.target_distribution.items())),
            "errors_per_utterance": {
                str(k): v for k, v in sorted(self.errors_per_utterance.items())
            },
            "seed": self.seed,
            "rule_toggles": dict(sorted(self.rule_toggles.items())),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "InjectionConfig":
        config = cls(
            target_distribution=dict(
                obj.get("target_distribution", DEFAULT_TARGET_DISTRIBUTION)
            ),
            errors_per_utterance={
                int(k): v
                for k, v in obj.get(
                    "errors_per_utterance", DEFAULT_ERRORS_PER_UTTERANCE
                ).items()
            },
            seed=int(obj.get("seed", 0)),
            rule_toggles=dict(obj.get("rule_toggles", {})),
        )
        config.validate()
        return config


@dataclass
class InjectionResult:
    text: list[str]
    applied_edits: list[GrammaticalEdit]
    # Category of each applied error, classified from its isolated one-step
    # diff. applied_edits aligns clean against the final text, where errors
    # on adjacent tokens merge into one span; these labels do not.
    applied_categories: list[str] = field(default_factory=list)


def utterance_seed(config_seed: int, utterance_id: str) -> int:
    digest = hashlib.blake2b(
        f"{config_seed}:{utterance_id}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


# --- corruption rules -------------------------------------------------------
# A rule returns the list of applicable sites; its apply() mutates a copy of
# the token list at one site.

def _det_sites(tokens, lex):
    return [i for i, t in enumerate(tokens) if t.lower() in lex.determiners]


def _det_apply(tokens, site, rng, lex):
    if rng.random() < 0.5:
        del tokens[site]
    else:
        pool = [d for d in _DET_SWAPS if d != tokens[site].lower()]
        tokens[site] = rng.choice(pool)


def _swap_rule(pool, words_attr):
    def sites(tokens, lex):
        words = getattr(lex, words_attr)
        return [i for i, t in enumerate(tokens) if t.lower() in words]

    def apply(tokens, site, rng, lex):
        choices = [w for w in pool if w != tokens[site].lower()]
        tokens[site] = rng.choice(choices)

    return sites, apply


def _content_token(t, lex):
    return t.isalpha() and not lex.is_closed_class(t) and not lex.is_verb_form(t)


def _noun_sites(tokens, lex):
    return [
        i
        for i, t in enumerate(tokens)
        if len(t) >= 3 and _content_token(t, lex)
    ]


def _toggle_plural(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    return word + "s"


def _noun_apply(tokens, site, rng, lex):
    tokens[site] = _toggle_plural(tokens[site])


def _verb_toggle_rule(slot_a, slot_b):
    def sites(tokens, lex):
        out = []
        for i, t in enumerate(tokens):
            info = lex.verb_forms.get(t.lower())
            if info is None:
                continue
            base, slots = info
            entry = lex.verb_by_base[base]
            if slot_a in slots and entry.form(slot_b) != t.lower():
                out.append(i)
            elif slot_b in slots and entry.form(slot_a) != t.lower():
                out.append(i)
        return out

    def apply(tokens, site, rng, lex):
        base, slots = lex.verb_forms[tokens[site].lower()]
        entry = lex.verb_by_base[base]
        target = slot_b if slot_a in slots else slot_a
        tokens[site] = entry.form(target)

    return sites, apply


def _order_sites(tokens, lex):
    return [
        i
        for i in range(len(tokens) - 1)
        if _content_token(tokens[i], lex)
        and _content_token(tokens[i + 1], lex)
        and tokens[i] != tokens[i + 1]
    ]


def _order_apply(tokens, site, rng, lex):
    tokens[site], tokens[site + 1] = tokens[site + 1], tokens[site]


def _spell_sites(tokens, lex):
    return [
        i
        for i, t in enumerate(tokens)
        if len(t) >= 4 and _content_token(t, lex)
    ]


def _spell_apply(tokens, site, rng, lex):
    word = tokens[site]
    for _ in range(4):
        pos = rng.randrange(1, len(word) - 1)
        letter = rng.choice(string.ascii_lowercase)
        if letter == word[pos].lower():
            continue
        candidate = word[:pos] + letter + word[pos + 1:]
        if lex.is_closed_class(candidate) or lex.is_verb_form(candidate):
            continue
        tokens[site] = candidate
        return


def _function_word_sites(tokens, lex):
    words = (lex.prepositions | lex.pronouns | lex.conjunctions) - lex.determiners
    return [i for i, t in enumerate(tokens) if t.lower() in words]


def _missing_apply(tokens, site, rng, lex):
    del tokens[site]


def _unnecessary_apply(tokens, site, rng, lex):
    tokens.insert(site + 1, tokens[site])


_prep_sites, _prep_apply = _swap_rule(_PREP_SWAPS, "prepositions")
_pron_sites, _pron_apply = _swap_rule(_PRON_SWAPS, "pronouns")
_agr_sites, _agr_apply = _verb_toggle_rule(SLOT_BASE, SLOT_THIRD)
_tense_sites, _tense_apply = _verb_toggle_rule(SLOT_BASE, SLOT_PAST)

RULES: dict[str, tuple[Callable, Callable]] = {
    DET: (_det_sites, _det_apply),
    PREP: (_prep_sites, _prep_apply),
    PRON: (_pron_sites, _pron_apply),
    NOUN_NUM: (_noun_sites, _noun_apply),
    VERB_AGR: (_agr_sites, _agr_apply),
    VERB_TENSE: (_tense_sites, _tense_apply),
    WORD_ORDER: (_order_sites, _order_apply),
    SPELL: (_spell_sites, _spell_apply),
    MISSING: (_function_word_sites, _missing_apply),
    UNNECESSARY: (_function_word_sites, _unnecessary_apply),
}


def inject_errors(
    clean: Sequence[str],
    config: InjectionConfig,
    seed: int,
    lex: Optional[Lexicons] = None,
) -> InjectionResult:
    """Corrupt a clean token sequence per the configured distribution.

    Worst case (no applicable sites for any sampled category) the input is
    returned unchanged with no edits.
    """
    config.validate()
    lex = lex or load_lexicons()
    rng = random.Random(seed)

    counts = sorted(config.errors_per_utterance.items())
    n_errors = rng.choices(
        [c for c, _ in counts], weights=[p for _, p in counts]
    )[0]

    categories = config.enabled_categories()
    weights = [config.target_distribution[c] for c in categories]
    tokens = list(clean)
    applied: list[str] = []
    if sum(weights) > 0:
        for _ in range(n_errors):
            for _attempt in range(1 + MAX_CATEGORY_RESAMPLES):
                category = rng.choices(categories, weights=weights)[0]
                sites_fn, apply_fn = RULES[category]
                sites = sites_fn(tokens, lex)
                if sites:
                    before = list(tokens)
                    apply_fn(tokens, rng.choice(sites), rng, lex)
                    applied.extend(
                        e.category for e in extract_edits(before, tokens, lex)
                    )
                    break
    return InjectionResult(
        text=tokens,
        applied_edits=extract_edits(clean, tokens, lex),
        applied_categories=applied,
    )


@dataclass
class CalibrationReport:
    n_records: int
    new_error_rate: float
    achieved_distribution: dict[str, float]
    target_distribution: dict[str, float]
    l1_distance: float
    passed: bool


def calibrate_injector(
    records, config: InjectionConfig, lex: Optional[Lexicons] = None
) -> CalibrationReport:
    """Run the injector over a dev slice and check the paper-style criteria:
    novel errors in over 80% of utterances and achieved category
    distribution close to target."""
    config.validate()
    lex = lex or load_lexicons()
    injected = []
    category_counts: dict[str, int] = {}
    for record in records:
        if record.text_gec is None or record.text_original is None:
            raise ValueError(f"record {record.id!r} missing text_gec/text_original")
        result = inject_errors(
            record.text_gec, config, utterance_seed(config.seed, record.id), lex
        )
        injected.append(dataclasses.replace(record, text_generated=result.text))
        for category in result.applied_categories:
            category_counts[category] = category_counts.get(category, 0) + 1
    rate = new_error_rate(injected, lex)
    total_edits = sum(category_counts.values())
    achieved = {
        c: n / total_edits for c, n in sorted(category_counts.items())
    } if total_edits else {}
    target = {
        c: config.target_distribution[c] for c in config.enabled_categories()
    }
    total = sum(target.values())
    target = {c: p / total for c, p in target.items()} if total else {}
    l1 = sum(
        abs(achieved.get(c, 0.0) - target.get(c, 0.0))
        for c in set(achieved) | set(target)
    )
    return CalibrationReport(
        n_records=len(injected),
        new_error_rate=rate,
        achieved_distribution=achieved,
        target_distribution=target,
        l1_distance=l1,
        passed=rate > 0.80,
    )


def inject_via_adapter(records, spec, invoke=None) -> dict[str, str]:
    """Fill text_generated through a reverse-GEC adapter.

    Returns {id: reason} for records that failed (missing response or
    per-record adapter error); those records are left untouched.
    """
    from .adapters import invoke_adapter

    invoke = invoke or invoke_adapter
    records = list(records)
    for record in records:
        if record.text_gec is None:
            raise ValueError(f"record {record.id!r} missing text_gec")
    requests = [
        {"id": r.id, "task": "reverse_gec", "text": list(r.text_gec)}
        for r in records
    ]
    result = invoke(spec, requests)
    failures = dict(result.errors)
    for missing_id in result.missing:
        failures.setdefault(missing_id, "missing-response")
    for record in records:
        response = result.responses.get(record.id)
        if record.id in failures or response is None:
            continue
        record.text_generated = list(response["text"])
    return failures
