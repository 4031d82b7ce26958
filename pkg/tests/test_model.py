import dataclasses

import pytest
from hypothesis import given, strategies as st

from ggsflow.model import (REGULAR, Concat, Cone, CrossCap, Double, FlowLine, FoldArc,
                           Generator, KindError, Nature, NatureError, Regular, Singularity,
                           Triple, Wedge, concat, cone, default_order, generators,
                           nature_numbers, nature_warnings, parse_kind, singular_number,
                           singular_number_by_table, validate_condition_H, wedge)


@pytest.mark.parametrize("text, numbers", [
    ("sr", (0, 1, 1)),
    ("ssa", (1, 2, 0)),
    ("s_sa", (1, 1, 0)),
    ("a", (1, 0, 0)),
    ("r^2", (0, 0, 2)),
    ("r²", (0, 0, 2)),
    ("s_s s_u", (0, 2, 0)),
    ("a3 s", (3, 1, 0)),
])
def test_nature_numbers(text, numbers):
    assert nature_numbers(text) == numbers


def test_nature_word_order_is_kept():
    n = Nature.parse("s_s s a")
    assert n.letters == ("s_s", "s", "a")
    assert n.positions(1) == [0, 1]
    assert n.has_saddle()
    assert str(Nature.parse("rr")) == "r^2"
    assert (Nature.parse("s") + Nature.parse("a")).letters == ("s", "a")


@pytest.mark.parametrize("bad", ["", "x", "s_x", "r^0", "  "])
def test_nature_rejects(bad):
    with pytest.raises(NatureError):
        Nature.parse(bad)


@pytest.mark.parametrize("kind, value", [
    (REGULAR, 0),
    (Cone(4), 3),
    (CrossCap(2), 1),
    (Double(2), 2),
    (Double(3), 4),
    (Triple(3), 6),
    (Triple(5), 12),
    (Concat(CrossCap(2), Double(2)), 3),
    (Wedge(Double(4), Cone(2)), 8),
    (Wedge(REGULAR, Cone(3)), 3),
])
def test_singular_number(kind, value):
    assert singular_number(kind) == value


@pytest.mark.parametrize("text", [
    "R", "C3", "W2", "D2", "T3", "wedge(C2,W3)", "wedge(C2,D2)", "wedge(D2,T3)",
    "cat(W2,D2)", "cat(D2,T5)",
])
def test_table_and_recursion_agree(text):
    kind = parse_kind(text)
    # two independent routes: per-class recursion and the closed-form table
    assert singular_number_by_table(kind) == kind.singular_number()


def test_table_is_silent_outside_its_forms():
    assert singular_number_by_table(Concat(Double(2), Double(2))) is None
    assert singular_number_by_table(Concat(Cone(2), Double(2))) is None


arity = st.integers(2, 6)
odd_arity = st.integers(1, 3).map(lambda k: 2 * k + 1)
basic_kinds = st.one_of(
    st.just(REGULAR), arity.map(Cone), arity.map(CrossCap), arity.map(Double), odd_arity.map(Triple))
kinds = st.recursive(basic_kinds, lambda inner: st.one_of(
    st.tuples(inner, inner).map(lambda pq: Wedge(*pq)),
    st.tuples(inner, inner).map(lambda pq: Concat(*pq))), max_leaves=6)


@given(kinds, kinds)
def test_singular_number_additivity(p, q):
    assert Wedge(p, q).singular_number() == p.singular_number() + q.singular_number() + 1
    assert Concat(p, q).singular_number() == p.singular_number() + q.singular_number()
    assert concat(p, q).singular_number() == p.singular_number() + q.singular_number()
    assert wedge(p, q).singular_number() == p.singular_number() + q.singular_number() + 1


def test_constructors():
    assert cone(1) == REGULAR
    assert concat(REGULAR, Double(2)) == Double(2)
    assert concat(CrossCap(2), REGULAR) == CrossCap(2)
    assert isinstance(Regular(), Regular)


@pytest.mark.parametrize("text", ["T4", "T1", "C1", "D1", "X2", "wedge(C2)", "cat(C2,D2)",
                                  "cat(D2,W2)", "C2 D2", "wedge(C2,D2", "D"])
def test_parse_kind_rejects(text):
    with pytest.raises(KindError):
        parse_kind(text)


def test_parse_kind_round_trip():
    for text in ["R", "C5", "wedge(wedge(C2,W2),D3)", "cat(W3,T3)"]:
        assert str(parse_kind(text)) == text
    assert parse_kind("cat(C2,D2)", strict=False) == Concat(Cone(2), Double(2))


def test_generator_labels():
    g = Generator.parse("x5':1:2")
    assert g == Generator("x5'", 1, 2) and str(g) == "x5':1:2"
    for bad in ["x5", "x5:1", ":1:1", "x:a:1"]:
        with pytest.raises(ValueError):
            Generator.parse(bad)


def test_generator_counts(ex51, ex71):
    for pair, counts in ((ex51, (3, 1, 3)), (ex71, (6, 5, 3))):
        gens = generators(pair)
        assert tuple(len(gens[k]) for k in (0, 1, 2)) == counts
        assert len(default_order(pair)) == sum(counts)


def test_examples_satisfy_condition_H(ex51, ex71):
    assert validate_condition_H(ex51) == []
    assert validate_condition_H(ex71) == []
    assert ex71.total_singular_number() == 6


def codes(pair):
    return {v.code for v in validate_condition_H(pair)}


def test_fold_between_crosscap_and_crossing(ex71):
    bad = dataclasses.replace(ex71, folds=ex71.folds + (FoldArc("x1", "x2"),))
    assert codes(bad) == {"fold-crosscap-crossing"}


def test_fold_on_regular_point(ex71):
    bad = dataclasses.replace(ex71, folds=(FoldArc("x2", "x3"),))
    assert codes(bad) == {"fold-regular"}


def test_fold_line_needs_two_lifts(ex71):
    line = FlowLine("f1", Generator("x5", 1, 1), Generator("x8", 0, 1), "fold", (1,))
    bad = dataclasses.replace(ex71, lines=ex71.lines + (line,))
    assert codes(bad) == {"lift-arity"}


def test_saddle_cone_line_needs_two_lifts(ex51):
    lines = list(ex51.lines)
    lines[0] = dataclasses.replace(lines[0], lifts=(1,))
    assert codes(dataclasses.replace(ex51, lines=tuple(lines))) == {"lift-arity"}


def test_reference_and_index_violations(ex71):
    lines = (
        FlowLine("u1", Generator("x1", 2, 1), Generator("x9", 1, 1), "regular", (1,)),
        FlowLine("v1", Generator("nope", 2, 1), Generator("x9", 1, 1), "regular", (1,)),
        FlowLine("v2", Generator("x9", 1, 2), Generator("x10", 0, 1), "regular", (1,)),
        FlowLine("v3", Generator("x1", 2, 1), Generator("x10", 0, 1), "regular", (1,)),
        FlowLine("v4", Generator("x9", 1, 1), Generator("x10", 0, 1), "sideways", (2,)),
    )
    found = codes(dataclasses.replace(ex71, lines=ex71.lines + lines))
    assert found == {"duplicate-id", "dangling-ref", "slot-range", "index-step",
                     "line-part", "lift-sign"}


def test_duplicate_singularity_and_bad_order(ex71):
    extra = Singularity("x3", REGULAR, Nature.parse("s"))
    assert "duplicate-id" in codes(dataclasses.replace(ex71, singularities=ex71.singularities + (extra,)))
    short = dataclasses.replace(ex71, order=ex71.order[1:])
    assert codes(short) == {"order"}
    twice = dataclasses.replace(ex71, order=ex71.order[:-1] + ex71.order[:1])
    assert codes(twice) == {"order"}


def test_nature_warnings_are_soft(ex71):
    assert nature_warnings(ex71) == []
    odd = dataclasses.replace(ex71, singularities=ex71.singularities[:1] + (
        Singularity("x2", Double(2), Nature.parse("r")),) + ex71.singularities[2:])
    (warning,) = nature_warnings(odd)
    assert "x2" in warning
