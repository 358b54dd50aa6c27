import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgecaug.edits import (
    CONJ,
    DET,
    MISSING,
    NOUN_NUM,
    ORTH,
    OTHER,
    PREP,
    PRON,
    SPELL,
    UNNECESSARY,
    VERB_AGR,
    VERB_FORM,
    VERB_TENSE,
    WORD_ORDER,
    apply_edits,
    classify_edit,
    damerau_levenshtein,
    error_distribution,
    extract_edits,
    f_half,
    new_error_rate,
    score_edits,
)
from sgecaug.manifest import UtteranceRecord

tokens = st.lists(st.sampled_from(["a", "b", "c", "dd"]), max_size=8)


# --- extraction ---------------------------------------------------------------

def test_equal_sequences_no_edits():
    assert extract_edits("I go home".split(), "I go home".split()) == []


def test_single_agreement_edit():
    edits = extract_edits("I goes to school".split(), "I go to school".split())
    assert len(edits) == 1
    edit = edits[0]
    assert edit.ref_span == (1, 2)
    assert edit.source_tokens == ("goes",)
    assert edit.target_tokens == ("go",)
    assert edit.category == VERB_AGR


def test_open_class_substitution_is_other():
    edits = extract_edits("he said me that".split(), "he told me that".split())
    assert len(edits) == 1
    assert edits[0].category == OTHER


def test_adjacent_ops_merge_into_one_edit():
    edits = extract_edits("a b c d".split(), "a x y d".split())
    assert len(edits) == 1
    assert edits[0].source_tokens == ("b", "c")
    assert edits[0].target_tokens == ("x", "y")


@settings(max_examples=200, deadline=None)
@given(tokens, tokens)
def test_patch_soundness(source, target):
    edits = extract_edits(source, target)
    assert apply_edits(source, edits) == target


@settings(max_examples=100, deadline=None)
@given(tokens)
def test_self_extraction_empty(source):
    assert extract_edits(source, source) == []


# --- classification -----------------------------------------------------------

@pytest.mark.parametrize(
    "source,target,category",
    [
        (["the"], [], DET),
        ([], ["an"], DET),
        (["to"], [], MISSING),
        ([], ["to"], UNNECESSARY),
        (["a"], ["the"], DET),
        (["in"], ["on"], PREP),
        (["he"], ["she"], PRON),
        (["and"], ["but"], CONJ),
        (["goes"], ["go"], VERB_AGR),
        (["went"], ["go"], VERB_TENSE),
        (["walked"], ["walk"], VERB_TENSE),
        (["going"], ["go"], VERB_FORM),
        (["school"], ["schools"], NOUN_NUM),
        (["cities"], ["city"], NOUN_NUM),
        (["recieve"], ["receive"], SPELL),
        (["big", "house"], ["house", "big"], WORD_ORDER),
        (["LONDON"], ["london"], ORTH),
        (["said"], ["told"], OTHER),
        (["very", "good"], ["really", "nice"], OTHER),
    ],
)
def test_classification_rules(source, target, category):
    assert classify_edit(source, target) == category


def test_classify_empty_edit_raises():
    with pytest.raises(ValueError):
        classify_edit([], [])


def test_classify_is_deterministic():
    assert classify_edit(["goes"], ["go"]) == classify_edit(["goes"], ["go"])


def test_damerau_levenshtein():
    assert damerau_levenshtein("recieve", "receive") == 1  # transposition
    assert damerau_levenshtein("abc", "abc") == 0
    assert damerau_levenshtein("ab", "") == 2
    assert damerau_levenshtein("kitten", "sitting") == 3


# --- scoring -------------------------------------------------------------------

def test_identical_edit_sets_score_one():
    edits = extract_edits("I goes to school".split(), "I go to school".split())
    score = score_edits(edits, edits)
    assert (score.triple.precision, score.triple.recall, score.triple.f_half) == (
        1.0, 1.0, 1.0,
    )


def test_f_half_reverse_gec_row():
    # P=77.6, R=26.1 should give F0.5 = 55.6 at one decimal.
    assert round(100 * f_half(0.776, 0.261), 1) == 55.6


def test_f_half_direct_formula():
    score = f_half(0.75, 0.25)
    assert score == pytest.approx(1.25 * 0.75 * 0.25 / (0.25 * 0.75 + 0.25))
    assert score == pytest.approx(0.535714, abs=1e-6)


def test_counts_to_triple():
    hyp = extract_edits(list("abcd"), list("xbcd"))  # one edit
    ref = extract_edits(list("abcd"), list("aycd"))  # different edit
    score = score_edits(hyp, ref)
    assert (score.tp, score.fp, score.fn) == (0, 1, 1)
    assert score.triple.f_half == 0.0


def test_category_not_part_of_match():
    hyp = extract_edits(["goes"], ["go"])
    ref = [hyp[0].__class__(
        ref_span=hyp[0].ref_span,
        hyp_span=hyp[0].hyp_span,
        source_tokens=hyp[0].source_tokens,
        target_tokens=hyp[0].target_tokens,
        category=OTHER,
    )]
    assert score_edits(hyp, ref).tp == 1


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.001, max_value=1.0),
    st.floats(min_value=0.001, max_value=1.0),
    st.floats(min_value=0.001, max_value=0.5),
)
def test_f_half_monotone(p, r, delta):
    if p + delta <= 1.0:
        assert f_half(p + delta, r) > f_half(p, r)
    if r + delta <= 1.0:
        assert f_half(p, r + delta) > f_half(p, r)


# --- distribution ---------------------------------------------------------------

def test_distribution_single_category():
    edits = extract_edits(["the"], ["a"])
    assert error_distribution([edits]) == {DET: 1.0}


def test_distribution_normalizes():
    sets = [
        extract_edits(["the"], ["a"]),
        extract_edits(["an"], ["the"]),
        extract_edits(["in"], ["on"]),
        extract_edits(["school"], ["schools"]),
    ]
    assert error_distribution(sets) == {DET: 0.5, PREP: 0.25, NOUN_NUM: 0.25}


def test_distribution_empty():
    assert error_distribution([]) == {}
    assert error_distribution([[], []]) == {}


# --- new error rate --------------------------------------------------------------

def make_record(rid, gec, original, generated):
    return UtteranceRecord(
        id=rid, speaker_id="s", part=1,
        text_gec=gec.split(), text_original=original.split(),
        text_generated=generated.split(),
    )


def test_new_error_rate_zero_when_generated_equals_original():
    records = [
        make_record("a", "i go to school", "i goes to school", "i goes to school"),
        make_record("b", "she likes it", "she like it", "she like it"),
    ]
    assert new_error_rate(records) == 0.0


def test_new_error_rate_zero_when_no_errors_at_all():
    records = [make_record("a", "i go to school", "i go to school", "i go to school")]
    assert new_error_rate(records) == 0.0


def test_new_error_rate_fraction():
    novel = [
        make_record(f"n{i}", "i go to the school", "i goes to the school",
                    "i goes to school")
        for i in range(8)
    ]
    stale = [
        make_record(f"s{i}", "i go to the school", "i goes to the school",
                    "i goes to the school")
        for i in range(2)
    ]
    assert new_error_rate(novel + stale) == pytest.approx(0.8)


def test_new_error_rate_missing_field():
    record = UtteranceRecord(id="x", speaker_id="s", part=1, text_gec=["a"])
    with pytest.raises(ValueError, match="text_original"):
        new_error_rate([record])
