"""Grammar induction, expansion, and the assembly index."""

import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from tunegram.model import (
    EmptyTuneError,
    Grammar,
    GrammarStructureError,
    TuneTooShortError,
    UnknownRuleError,
    parse_grammar,
    render_grammar,
    validate_grammar,
)
from tunegram.sequitur import (
    expand,
    expand_rule,
    grammars_equivalent,
    induce,
    pai,
    to_intervals,
)

# "abracadabra" with a=0 b=1 r=2 c=3 d=4
ABRACADABRA = (0, 1, 2, 0, 3, 0, 4, 0, 1, 2, 0)

PITCH16 = (2, 11, 7, 4, 4, 7, 4, 4, 2, 11, 7, 4, 4, 7, 4, 4)

# a 46-note hornpipe phrase: two strains, each played twice
HORNPIPE = (2, 11, 7, 4, 4, 7, 4, 4, 7, 11, 2, 1, 2, 9, 6, 2, 2, 6, 2, 2,
            6, 9, 2, 1, 2, 11, 7, 4, 4, 7, 4, 4, 7, 11, 2, 4, 6, 2, 11, 9,
            6, 2, 4, 6, 4, 4)

HORNPIPE_GRAMMAR = (
    "p0 -> 2 p1 p2 9 p3 p3 6 9 p2 p1 2 4 p4 11 9 p4 4 6 p5; "
    "p1 -> 11 p6 p6 7 11; p2 -> 2 1 2; p3 -> p4 2; p4 -> 6 2; "
    "p5 -> 4 4; p6 -> 7 p5")


tunes = st.lists(st.integers(0, 23), min_size=1, max_size=256)


def test_abracadabra_pai_is_7():
    g = induce(ABRACADABRA)
    assert pai(g) == 7
    assert expand(g) == ABRACADABRA
    assert validate_grammar(g).ok


def test_abracadabra_grammar_shape():
    # Rule utility leaves exactly one auxiliary rule for "abra"; a
    # 4-rule variant that splits it into digram rules would leave each
    # sub-rule referenced once and get inlined.
    g = induce(ABRACADABRA)
    assert render_grammar(g) == "p0 -> p1 3 0 4 p1\np1 -> 0 1 2 0\n"


def test_single_note_tune():
    g = induce([5])
    assert render_grammar(g) == "p0 -> 5\n"
    assert pai(g) == 0


def test_pitch16_pai_is_6():
    g = induce(PITCH16)
    assert pai(g) == 6
    assert expand(g) == PITCH16


def test_interval16_pai():
    # The leading 0 treats the first note as a zero interval from
    # nothing; the sequence still factors to assembly index 8.
    iv = (0, 9, -4, -3, 0, 3, -3, 0, -2, 9, -4, -3, 0, 3, -3, 0)
    g = induce(iv)
    assert expand(g) == iv
    assert validate_grammar(g).ok
    assert pai(g) == 8


def test_induce_rejects_empty_and_non_ints():
    with pytest.raises(EmptyTuneError):
        induce([])
    with pytest.raises(TypeError):
        induce([1, "2"])
    with pytest.raises(TypeError):
        induce([True])


def test_hornpipe_round_trip_and_canonical():
    g = induce(HORNPIPE)
    assert expand(g) == HORNPIPE
    assert validate_grammar(g).ok


def test_hornpipe_reference_grammar_expands():
    g = parse_grammar(HORNPIPE_GRAMMAR)
    assert expand(g) == HORNPIPE
    assert pai(g) == 28


def test_expand_rule_pieces():
    g = parse_grammar(HORNPIPE_GRAMMAR)
    assert expand_rule(g, 5) == (4, 4)
    assert expand_rule(g, 4) == (6, 2)
    assert expand_rule(g, 6) == (7, 4, 4)
    assert expand_rule(g, 0) == expand(g)


def test_expand_rule_errors():
    g = parse_grammar("p0 -> 1 2")
    with pytest.raises(UnknownRuleError):
        expand_rule(g, 3)
    cyclic = Grammar.from_mapping({0: ["p1", "p1"], 1: ["p1"]})
    with pytest.raises(GrammarStructureError):
        expand(cyclic)
    dangling = Grammar.from_mapping({0: ["p9"]})
    with pytest.raises(UnknownRuleError):
        expand(dangling)


def test_expand_deep_grammar_is_iterative():
    # a 3000-rule reference chain would blow the recursion limit if
    # expansion recursed
    mapping = {i: [f"p{i + 1}"] for i in range(3000)}
    mapping[3000] = [7, 8]
    g = Grammar.from_mapping(mapping)
    assert expand(g) == (7, 8)


def test_pai_counts_joins():
    assert pai(parse_grammar("p0 -> 1 2 3")) == 2
    assert pai(parse_grammar("p0 -> p1 p1; p1 -> 4 5 6")) == 3


def test_to_intervals():
    assert to_intervals([2, 11, 7]) == (9, -4)
    assert to_intervals([4, 4, 4]) == (0, 0)
    assert to_intervals(PITCH16) == (9, -4, -3, 0, 3, -3, 0, -2,
                                     9, -4, -3, 0, 3, -3, 0)
    with pytest.raises(TuneTooShortError):
        to_intervals([3])


@given(tunes.filter(lambda t: len(t) >= 2))
def test_to_intervals_reconstructs(t):
    iv = to_intervals(t)
    assert len(iv) == len(t) - 1
    acc = t[0]
    rebuilt = [acc]
    for d in iv:
        acc += d
        rebuilt.append(acc)
    assert rebuilt == t


@given(tunes)
@settings(max_examples=200, deadline=None)
def test_round_trip_and_canonicality(t):
    g = induce(t)
    assert expand(g) == tuple(t)
    report = validate_grammar(g)
    assert report.structural_ok, report.structural_violations
    assert report.canonical_ok, report.canonical_violations


@given(tunes)
@settings(max_examples=100, deadline=None)
def test_induction_is_deterministic(t):
    assert render_grammar(induce(t)) == render_grammar(induce(t))


@given(tunes)
@settings(max_examples=200, deadline=None)
def test_pai_bounds(t):
    p = pai(induce(t))
    assert 0 <= p <= len(t) - 1


def test_pai_is_length_minus_one_without_repeats():
    t = list(range(40))  # strictly increasing: every digram unique
    assert pai(induce(t)) == len(t) - 1


REGRESSION_TUNES = [
    # runs of one symbol around the overlap rule
    [4] * 2, [4] * 3, [4] * 4, [4] * 5, [4] * 9, [4] * 17,
    # period-2 and period-3 with seams
    [0, 1] * 8, [0, 1] * 8 + [0], [0, 1, 2] * 6, [0, 1, 2] * 6 + [0, 1],
    # nested reuse: the inner pair also appears alone
    [0, 1, 0, 1, 2, 0, 1, 0, 1, 2, 3],
    # rule-utility churn: a rule forms, then its last use disappears
    # into a bigger rule and it must be inlined
    [0, 0, 1, 0, 0, 1, 2, 0, 0, 1, 0, 0, 1, 2],
    [1, 1, 1, 2, 1, 1, 1, 2, 1, 1],
    [0, 1, 1, 1, 0, 1, 1, 1, 0],
    # repeated digram created by a substitution, not by fresh input
    [5, 3, 5, 3, 3, 5, 3, 5],
    [2, 2, 3, 2, 2, 2, 3, 2],
]


@pytest.mark.parametrize("t", REGRESSION_TUNES, ids=lambda t: "".join(map(str, t))[:24])
def test_round_trip_regressions(t):
    g = induce(t)
    assert expand(g) == tuple(t)
    assert validate_grammar(g).ok


def test_long_periodic_stress():
    rnd = random.Random(7)
    for period in (2, 3, 4, 5, 7, 11):
        motif = [rnd.randrange(4) for _ in range(period)]
        for reps in (2, 3, 8, 31):
            for extra in (0, 1, period - 1):
                t = (motif * reps) + motif[:extra]
                g = induce(t)
                assert expand(g) == tuple(t)
                assert validate_grammar(g).ok, (motif, reps, extra)


def test_grammars_equivalent_ignores_numbering():
    a = parse_grammar("p0 -> p1 3 p1; p1 -> 1 2")
    b = parse_grammar("p0 -> p7 3 p7; p7 -> 1 2")
    assert grammars_equivalent(a, b)


def test_grammars_equivalent_checks_structure_and_tune():
    flat = parse_grammar("p0 -> 1 2 3")
    factored = parse_grammar("p0 -> p1 3; p1 -> 1 2")
    other = parse_grammar("p0 -> 1 2 4")
    assert not grammars_equivalent(flat, factored)  # same tune, new split
    assert not grammars_equivalent(flat, other)


@pytest.mark.xfail(
    strict=True,
    reason="online digram replacement does not give a 2-join bound for "
    "doubled strings: the seam can force a different rule decomposition "
    "on the second copy (about a quarter of random tunes exceed it)")
def test_doubling_adds_at_most_two_joins():
    rnd = random.Random(12)
    for _ in range(300):
        n = rnd.randint(2, 60)
        k = rnd.randint(1, 8)
        t = [rnd.randrange(k) for _ in range(n)]
        assert pai(induce(t + t)) <= pai(induce(t)) + 2, t
