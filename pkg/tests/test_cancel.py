import dataclasses

import numpy as np
import pytest

from ggsflow.cancel import (CancellationError, apply_cancellation, check_conservation,
                            find_partner, run_to_core, succession, successor_kind)
from ggsflow.chain import ChainComplex, build_complex, homology
from ggsflow.model import (REGULAR, Cone, CrossCap, Double, Generator, Nature, Singularity,
                           Triple, Wedge, concat, parse_kind, wedge)

from conftest import load_fixture
from helpers import labelled
from tables import EX71_EVENTS, EX71_STEP_TABLES

G = Generator.parse


def sing(sid, kind, nature):
    return Singularity(sid, parse_kind(kind, strict=False), Nature.parse(nature))


def label_keyed(table):
    labels, cells = table
    return sorted(labels), cells


def test_partner_lookup(ex71_complex):
    assert find_partner(ex71_complex, G("x1:2:1"), G("x3:1:1")) == G("x2:2:2")
    assert find_partner(ex71_complex, G("x9:1:1"), G("x10:0:1")) == G("x11:0:1")
    with pytest.raises(CancellationError, match="is zero"):
        find_partner(ex71_complex, G("x1:2:1"), G("x4:1:1"))


def test_partner_must_be_unique(ex71_complex):
    m = np.array(ex71_complex.matrix)
    m[ex71_complex.index(G("x3:1:1")), ex71_complex.index(G("x2:2:1"))] = 1
    crowded = ChainComplex(ex71_complex.generators, m)
    with pytest.raises(CancellationError, match="several partner candidates: x2:2:1, x2:2:2"):
        find_partner(crowded, G("x1:2:1"), G("x3:1:1"))


@pytest.mark.parametrize("x1, saddle, x3, expected", [
    (REGULAR, REGULAR, REGULAR, REGULAR),
    (CrossCap(2), REGULAR, Double(2), concat(CrossCap(2), Double(2))),
    (Cone(2), REGULAR, Double(2), Wedge(REGULAR, Double(2))),
    (Double(2), REGULAR, Cone(3), Wedge(Double(2), Cone(2))),
    (Double(2), Cone(2), CrossCap(2), Wedge(Double(2), CrossCap(2))),
    (REGULAR, Cone(3), REGULAR, wedge(Wedge(REGULAR, REGULAR), REGULAR)),
    (REGULAR, Double(2), REGULAR, Double(2)),
    (CrossCap(2), Triple(3), REGULAR, concat(CrossCap(2), Triple(3))),
])
def test_successor_kind_conserves_singular_number(x1, saddle, x3, expected):
    kind = successor_kind(x1, saddle, x3)
    assert kind == expected
    assert kind.singular_number() == x1.singular_number() + saddle.singular_number() + x3.singular_number()


def test_succession_regular_chain():
    kind, nature = succession(sing("p", "R", "r"), sing("q", "R", "s"), sing("t", "R", "r"),
                              G("p:2:1"), G("q:1:1"))
    assert kind == REGULAR and nature == Nature.parse("r")


def test_succession_keeps_second_saddle_letter():
    # index-1 pivot: x1 hosts the minimum, x2 the saddle
    kind, nature = succession(sing("m", "R", "a"), sing("d", "D2", "s2"), sing("n", "R", "a"),
                              G("d:1:1"), G("m:0:1"))
    assert kind == Double(2) and nature == Nature.parse("s a")


def test_succession_rejects_bad_roles():
    a, s, r = sing("a", "R", "a"), sing("s", "R", "s"), sing("r", "R", "r")
    with pytest.raises(CancellationError, match="must host the index-1"):
        succession(r, a, s, G("r:2:1"), G("s:1:1"))
    with pytest.raises(CancellationError, match="distinct"):
        succession(r, s, r, G("r:2:1"), G("s:1:1"))


def test_example_5_1_single_cancellation(ex51):
    trace = run_to_core(ex51)
    (event,) = trace.events
    assert event.partner == G("x2:2:1")
    assert event.successor.id == "x1'"
    assert event.successor.kind == Wedge(Double(2), CrossCap(2))
    assert event.successor.nature == Nature.parse("r^2")
    assert trace.core_flow
    assert check_conservation(trace) == []


def test_example_7_1_events(ex71):
    trace = run_to_core(ex71)
    got = [(e.r, str(e.hi), str(e.lo), str(e.partner), e.successor.id,
            e.successor.kind, e.successor.nature) for e in trace.events]
    want = [(r, hi, lo, partner, sid, parse_kind(kind, strict=False), Nature.parse(nature))
            for r, hi, lo, partner, sid, kind, nature in EX71_EVENTS]
    assert got == want


def test_example_7_1_intermediate_matrices(ex71):
    trace = run_to_core(ex71)
    assert len(trace.steps) == len(EX71_STEP_TABLES)
    for step, table in zip(trace.steps, EX71_STEP_TABLES):
        labels, cells = labelled(step.complex)
        assert (sorted(labels), cells) == label_keyed(table)


def test_example_7_1_core_flow(ex71):
    trace = run_to_core(ex71)
    final = trace.final_pair
    assert [(s.id, str(s.kind), str(s.nature)) for s in final.singularities] == [
        ("x1'", "cat(W2,D2)", "r^2"), ("x5'", "cat(W2,D2)", "a^2")]
    assert trace.core_flow and trace.final_complex.size == 4
    assert check_conservation(trace) == []
    assert [str(g) for g in trace.final_complex.generators[:2]] == ["x5':0:2", "x5':0:1"]


def test_mixed_saddle_warning(ex71):
    trace = run_to_core(ex71)
    assert all(not e.warnings for e in trace.events)
    pair = dataclasses.replace(ex71, singularities=tuple(
        dataclasses.replace(s, kind=CrossCap(2)) if s.id == "x8" else s for s in ex71.singularities),
        folds=())
    trace = run_to_core(pair)
    fourth = trace.events[3]
    assert fourth.successor.kind == concat(Double(2), CrossCap(2))
    assert fourth.warnings and "mixed saddle" in fourth.warnings[0]


def test_no_pivots_means_empty_trace():
    pair = load_fixture("empty")
    trace = run_to_core(pair)
    assert trace.steps == [] and trace.core_flow and check_conservation(trace) == []


def test_apply_rejects_bad_pivots(ex71, ex71_complex):
    with pytest.raises(CancellationError, match="not consecutive"):
        apply_cancellation(ex71, ex71_complex, G("x1:2:1"), G("x10:0:1"))
    with pytest.raises(CancellationError, match="cancellation needs"):
        apply_cancellation(ex71, ex71_complex, G("x1:2:1"), G("x4:1:1"))


def test_conservation_flags_tampering(ex71):
    trace = run_to_core(ex71)
    step = trace.steps[0]
    bad = dataclasses.replace(step.event, successor=dataclasses.replace(
        step.event.successor, kind=Double(2), nature=Nature.parse("r")))
    trace.steps[0] = dataclasses.replace(step, event=bad)
    codes = {v.code for v in check_conservation(trace)}
    assert codes == {"singular-number", "nature-number"}


def test_homology_is_preserved_on_each_step(ex71):
    trace = run_to_core(ex71)
    before = homology(trace.complex)
    for step in trace.steps:
        assert homology(step.complex) == before
        assert homology(build_complex(step.pair, validate=False)) == before
