"""The GGS chain complex of a pair, its structural checks and its homology."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import intlinalg as il
from .model import (FOLD_PART, FlowLine, GGSPair, Generator, Violation,
                    default_order, expected_lift_arity, validate_condition_H)


class ComplexError(ValueError):
    """The pair cannot be turned into a chain complex."""


def line_contribution(line: FlowLine, pair: GGSPair) -> int:
    """Signed contribution of one flow line to its intersection number."""
    want = expected_lift_arity(line, pair)
    if len(line.lifts) != want:
        raise ComplexError(f"line {line.id} needs {want} lift sign(s), got {len(line.lifts)}")
    if pair.is_saddle_cone_generator(line.src) or pair.is_saddle_cone_generator(line.dst):
        first, second = line.lifts
        return first if first == second else 0
    if line.part == FOLD_PART:
        return sum(line.lifts)
    return line.lifts[0]


def intersection_number(hi: Generator, lo: Generator, pair: GGSPair) -> int:
    if hi.k != lo.k + 1:
        raise ComplexError(f"{hi} and {lo} are not consecutive generators")
    return sum(line_contribution(line, pair)
               for line in pair.lines if line.src == hi and line.dst == lo)


@dataclass(frozen=True)
class ChainComplex:
    """Generators in filtration order plus the boundary matrix.

    ``matrix[i, j]`` is the coefficient of generator ``i`` in the boundary of
    generator ``j``.  The array is read-only.
    """

    generators: Tuple[Generator, ...]
    matrix: np.ndarray

    def __post_init__(self):
        gens = tuple(self.generators)
        m = np.array(self.matrix, dtype=np.int64).reshape(len(gens), len(gens))
        m.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return len(self.generators)

    def index(self, g: Generator) -> int:
        return self.generators.index(g)

    def grade(self, k: int) -> List[int]:
        return [i for i, g in enumerate(self.generators) if g.k == k]

    def entry(self, row: Generator, col: Generator) -> int:
        return int(self.matrix[self.index(row), self.index(col)])

    def as_lists(self) -> List[List[int]]:
        return il.to_matrix(self.matrix)

    def nonzero(self) -> Dict[Tuple[str, str], int]:
        """Label-keyed nonzero entries, ``(row, col) -> value``."""
        out = {}
        for i, j in zip(*np.nonzero(self.matrix)):
            out[(str(self.generators[i]), str(self.generators[j]))] = int(self.matrix[i, j])
        return out

    def block(self, k: int) -> List[List[int]]:
        """The boundary from grade ``k`` to grade ``k - 1`` as a dense block."""
        rows, cols = self.grade(k - 1), self.grade(k)
        return [[int(self.matrix[i, j]) for j in cols] for i in rows]

    def is_zero(self) -> bool:
        return not self.matrix.any()


def build_complex(pair: GGSPair, order: Optional[Sequence[Generator]] = None,
                  validate: bool = True) -> ChainComplex:
    if validate:
        problems = validate_condition_H(pair)
        if problems:
            raise ComplexError("; ".join(str(p) for p in problems))
    gens = list(order if order is not None else (pair.order or default_order(pair)))
    pos = {g: i for i, g in enumerate(gens)}
    n = len(gens)
    m = [[0] * n for _ in range(n)]
    for line in pair.lines:
        m[pos[line.dst]][pos[line.src]] += line_contribution(line, pair)
    return ChainComplex(tuple(gens), np.array(m, dtype=np.int64).reshape(n, n))


def check_d2(complex_: ChainComplex) -> Tuple[bool, Optional[Tuple[Generator, Generator, int]]]:
    """``(True, None)`` if the boundary squares to zero, else ``(False, witness)``
    with the first nonzero entry of the square in row-major order."""
    m = complex_.as_lists()
    sq = il.matmul(m, m)
    for i, row in enumerate(sq):
        for j, v in enumerate(row):
            if v:
                return False, (complex_.generators[i], complex_.generators[j], v)
    return True, None


def check_structure(complex_: ChainComplex) -> List[Violation]:
    """Entries in {-1,0,1}; every index-1 column and every index-1 row of the
    index-2 block is empty or exactly one +1 and one -1."""
    out = []
    gens = complex_.generators
    m = complex_.matrix
    for i, j in zip(*np.nonzero(m)):
        if abs(int(m[i, j])) > 1:
            out.append(Violation("entry-range", f"entry ({gens[i]}, {gens[j]}) = {int(m[i, j])}"))
    for j in complex_.grade(1):
        vals = sorted(int(m[i, j]) for i in complex_.grade(0) if m[i, j])
        if vals and vals != [-1, 1]:
            out.append(Violation("column-pair", f"boundary of {gens[j]} has entries {vals}"))
    for i in complex_.grade(1):
        vals = sorted(int(m[i, j]) for j in complex_.grade(2) if m[i, j])
        if vals and vals != [-1, 1]:
            out.append(Violation("row-pair", f"{gens[i]} appears in boundaries with entries {vals}"))
    return out


def check_lemma_cone(complex_: ChainComplex, pair: GGSPair) -> List[Violation]:
    """Incoming and outgoing coefficients at a saddle cone never both survive."""
    out = []
    m = complex_.matrix
    gens = complex_.generators
    for y, g in enumerate(gens):
        if not pair.is_saddle_cone_generator(g):
            continue
        for x in complex_.grade(2):
            if not m[y, x]:
                continue
            for z in complex_.grade(0):
                if m[z, y]:
                    out.append(Violation(
                        "saddle-cone",
                        f"n({gens[x]},{g}) * n({g},{gens[z]}) = {int(m[y, x]) * int(m[z, y])}"))
    return out


@dataclass(frozen=True)
class HomologyResult:
    betti: Tuple[int, int, int]
    torsion: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]

    def __str__(self) -> str:
        parts = []
        for k in range(3):
            terms = ([f"Z^{self.betti[k]}"] if self.betti[k] > 1 else ["Z"] if self.betti[k] else [])
            terms += [f"Z/{t}" for t in self.torsion[k]]
            parts.append(f"H{k} = {' + '.join(terms) if terms else '0'}")
        return ", ".join(parts)


def homology(complex_: ChainComplex) -> HomologyResult:
    dims = [len(complex_.grade(k)) for k in range(3)]
    ranks = {}
    torsion = {}
    for k in (1, 2):
        factors = il.invariant_factors(complex_.block(k), dims[k])
        ranks[k] = len(factors)
        torsion[k] = tuple(x for x in factors if x > 1)
    ranks[0] = ranks[3] = 0
    torsion[3] = ()
    betti = []
    for k in range(3):
        kernel = dims[k] - ranks.get(k, 0)
        betti.append(kernel - ranks[k + 1])
    return HomologyResult(tuple(betti), (torsion[1], torsion[2], ()))
