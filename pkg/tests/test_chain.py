import dataclasses

import numpy as np
import pytest

from ggsflow.chain import (ChainComplex, ComplexError, build_complex, check_d2,
                           check_lemma_cone, check_structure, homology,
                           intersection_number, line_contribution)
from ggsflow.model import FlowLine, Generator
from ggsflow.randomized import random_complexes

from helpers import complex_from_table, labelled
from tables import EX51_TABLE, EX71_TABLE_1

G = Generator.parse


def line(src, dst, lifts, part="regular"):
    return FlowLine("t", G(src), G(dst), part, tuple(lifts))


def test_line_contributions(ex51, ex71):
    assert line_contribution(line("x4:1:1", "x7:0:1", [-1]), ex71) == -1
    assert line_contribution(line("x5:1:1", "x8:0:1", [1, 1], "fold"), ex71) == 2
    assert line_contribution(line("x5:1:1", "x8:0:1", [1, -1], "fold"), ex71) == 0
    # saddle cone: equal lifts count once, opposite lifts cancel
    assert line_contribution(line("x1:2:1", "x3:1:1", [-1, -1]), ex51) == -1
    assert line_contribution(line("x3:1:1", "x4:0:1", [1, -1]), ex51) == 0
    with pytest.raises(ComplexError):
        line_contribution(line("x3:1:1", "x4:0:1", [1]), ex51)


def test_intersection_numbers(ex51, ex71):
    assert intersection_number(G("x1:2:1"), G("x3:1:1"), ex51) == 1
    assert intersection_number(G("x3:1:1"), G("x4:0:1"), ex51) == 0
    assert intersection_number(G("x2:2:2"), G("x9:1:1"), ex71) == -1
    assert intersection_number(G("x2:2:1"), G("x9:1:1"), ex71) == 0
    with pytest.raises(ComplexError):
        intersection_number(G("x1:2:1"), G("x10:0:1"), ex71)


def test_example_matrices(ex51, ex71):
    assert labelled(build_complex(ex51)) == (EX51_TABLE[0], EX51_TABLE[1])
    assert labelled(build_complex(ex71)) == (EX71_TABLE_1[0], EX71_TABLE_1[1])


def test_build_rejects_invalid(ex71):
    bad = dataclasses.replace(ex71, lines=ex71.lines + (line("x9:1:1", "x99:0:1", [1]),))
    with pytest.raises(ComplexError, match="dangling-ref"):
        build_complex(bad)


def test_complex_is_read_only(ex71_complex):
    with pytest.raises(ValueError):
        ex71_complex.matrix[0, 0] = 5


def test_d2_holds_on_examples(ex51, ex71_complex):
    assert check_d2(build_complex(ex51)) == (True, None)
    assert check_d2(ex71_complex) == (True, None)


def test_d2_witness_is_first_row_major(ex71):
    lines = tuple(dataclasses.replace(l, lifts=(1,)) if l.id == "u5" else l for l in ex71.lines)
    c = build_complex(dataclasses.replace(ex71, lines=lines))
    ok, witness = check_d2(c)
    assert not ok
    assert witness == (G("x11:0:1"), G("x1:2:1"), 2)
    square = c.matrix @ c.matrix
    first = tuple(np.argwhere(square)[0])
    assert (c.generators[first[0]], c.generators[first[1]], int(square[first])) == witness


def test_structure_checks(ex71_complex):
    assert check_structure(ex71_complex) == []
    labels, cells = EX71_TABLE_1
    cells = dict(cells)
    cells[("x12:0:1", "x5:1:2")] = 2
    cells[("x9:1:1", "x2:2:2")] = 1
    codes = sorted(v.code for v in check_structure(complex_from_table((labels, cells))))
    assert codes == ["column-pair", "entry-range", "row-pair"]


def test_lemma_cone(ex51):
    assert check_lemma_cone(build_complex(ex51), ex51) == []
    lines = tuple(dataclasses.replace(l, lifts=(1, 1)) if l.id == "u3" else l for l in ex51.lines)
    bad = dataclasses.replace(ex51, lines=lines)
    found = check_lemma_cone(build_complex(bad), bad)
    # both incoming repellers pair with the surviving outgoing coefficient
    assert [v.code for v in found] == ["saddle-cone", "saddle-cone"]
    assert "n(x1:2:1,x3:1:1) * n(x3:1:1,x4:0:1) = 1" in found[0].message


def test_homology_examples(ex51, ex71_complex):
    h = homology(build_complex(ex51))
    assert h.betti == (3, 0, 2) and h.torsion == ((), (), ())
    assert homology(ex71_complex).betti == (2, 0, 2)
    assert str(homology(ex71_complex)) == "H0 = Z^2, H1 = 0, H2 = Z^2"


def test_homology_of_zero_matrix():
    gens = tuple(G(x) for x in ["a:0:1", "b:0:1", "c:1:1", "d:2:1", "e:2:2"])
    assert homology(ChainComplex(gens, np.zeros((5, 5)))).betti == (2, 1, 2)
    assert homology(ChainComplex((), np.zeros((0, 0)))).betti == (0, 0, 0)


def test_homology_torsion():
    # a projective-plane-like cell structure: boundary of the 2-cell wraps twice
    gens = (G("v:0:1"), G("e:1:1"), G("f:2:1"))
    m = np.zeros((3, 3))
    m[1, 2] = 2
    h = homology(ChainComplex(gens, m))
    assert h.betti == (1, 0, 0) and h.torsion == ((), (2,), ())
    assert str(h) == "H0 = Z, H1 = Z/2, H2 = 0"


def test_euler_characteristic_on_random_complexes():
    for c in random_complexes(7, 100):
        dims = [len(c.grade(k)) for k in range(3)]
        b = homology(c).betti
        assert dims[0] - dims[1] + dims[2] == b[0] - b[1] + b[2]
        assert check_d2(c) == (True, None)
        assert check_structure(c) == []
