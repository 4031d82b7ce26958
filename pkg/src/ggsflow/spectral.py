"""Spectral sequence of a finest filtration, computed two independent ways.

``oracle_pages`` works straight from the lattice definitions
``Z^r_p = {c in F_p : dc in F_{p-r}}`` and
``E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})`` using exact integer
arithmetic.  ``sssa`` sweeps the diagonals of the boundary matrix and reads
the pages off the primary pivots it finds.  ``cross_validate`` compares them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import intlinalg as il
from .chain import ChainComplex
from .model import Generator

PRIMARY = "primary"
CHANGE_OF_BASIS = "change-of-basis"
PLAIN = "plain"


class FiltrationError(ValueError):
    pass


class SweepError(ArithmeticError):
    """A basis change would need a non-integer multiplier."""


@dataclass(frozen=True)
class Filtration:
    """Generator at position ``p`` is the one added at filtration level ``p``."""

    order: Tuple[Generator, ...]

    def position(self, g: Generator) -> int:
        return self.order.index(g)

    def grade(self, p: int) -> int:
        return self.order[p].k

    def __len__(self) -> int:
        return len(self.order)


def finest_filtration(complex_: ChainComplex, order: Optional[Sequence[Generator]] = None) -> Filtration:
    gens = tuple(order) if order is not None else complex_.generators
    if sorted(gens) != sorted(complex_.generators) or len(set(gens)) != len(gens):
        raise FiltrationError("order must list every generator of the complex exactly once")
    highest = None
    for g in gens:
        if highest is not None and g.k < highest.k:
            raise FiltrationError(f"{highest} (index {highest.k}) comes before {g} (index {g.k})")
        if highest is None or g.k > highest.k:
            highest = g
    return Filtration(gens)


def _ordered_matrix(complex_: ChainComplex, filtration: Filtration) -> il.Matrix:
    perm = [complex_.index(g) for g in filtration.order]
    m = complex_.matrix
    return [[int(m[i, j]) for j in perm] for i in perm]


@dataclass(frozen=True)
class Page:
    r: int
    ranks: Tuple[int, ...]
    torsion: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()

    def is_zero_at(self, p: int) -> bool:
        return self.ranks[p] == 0 and p not in dict(self.torsion)


@dataclass(frozen=True, order=True)
class DifferentialRecord:
    r: int
    source: int
    target: int
    value: Optional[int]


# ---------------------------------------------------------------------------
# Definition-based oracle


class _Lattices:
    def __init__(self, m: il.Matrix):
        self.m = m
        self.n = len(m)
        self._z: Dict[Tuple[int, int], List[il.Vector]] = {}

    def z(self, r: int, q: int) -> List[il.Vector]:
        """Spanning set of ``Z^r_q``: chains in ``F_q`` whose boundary is in ``F_{q-r}``."""
        key = (r, q)
        if key in self._z:
            return self._z[key]
        n = self.n
        if q < 0 or n == 0:
            out: List[il.Vector] = []
        else:
            top = min(q, n - 1)
            rows = range(max(q - r + 1, 0), n)
            sub = [[self.m[i][j] for j in range(top + 1)] for i in rows]
            out = [v + [0] * (n - top - 1) for v in il.kernel_basis(sub, top + 1)]
        self._z[key] = out
        return out

    def boundary(self, vectors: Sequence[il.Vector]) -> List[il.Vector]:
        return [il.matvec(self.m, v) for v in vectors]

    def denominator(self, r: int, p: int) -> List[il.Vector]:
        return self.z(r - 1, p - 1) + self.boundary(self.z(r - 1, p + r - 1))


def _top_generator(vectors: Sequence[il.Vector], p: int, n: int) -> Optional[il.Vector]:
    """A vector of the span whose coordinate ``p`` generates the projection
    of the span onto that coordinate (taken positive), or ``None``."""
    flipped = [list(reversed(v)) for v in vectors]
    basis, pivots = il.lattice_basis(flipped, n)
    if not pivots or pivots[0] != n - 1 - p:
        return None
    return list(reversed(basis[0]))


def oracle_pages(complex_: ChainComplex, filtration: Filtration,
                 r_max: Optional[int] = None) -> Tuple[List[Page], List[DifferentialRecord]]:
    m = _ordered_matrix(complex_, filtration)
    n = len(m)
    r_max = n if r_max is None else r_max
    lat = _Lattices(m)
    pages: List[Page] = []
    diffs: List[DifferentialRecord] = []
    for r in range(r_max + 1):
        ranks = []
        torsion = []
        for p in range(n):
            basis, pivots = il.lattice_basis(lat.z(r, p), n)
            free, tors = il.quotient_structure(lat.denominator(r, p), basis, pivots)
            ranks.append(free)
            if tors:
                torsion.append((p, tuple(tors)))
        pages.append(Page(r, tuple(ranks), tuple(torsion)))
        if r == 0:
            continue
        for p in range(r, n):
            images = [v for v in lat.boundary(lat.z(r, p)) if any(v)]
            if not images:
                continue
            dbasis, dpivots = il.lattice_basis(lat.denominator(r, p - r), n)
            if all(il.solve_in_lattice(v, dbasis, dpivots) is not None for v in images):
                continue
            diffs.append(DifferentialRecord(r, p, p - r, _differential_value(lat, r, p, n)))
    return pages, diffs


def _differential_value(lat: _Lattices, r: int, p: int, n: int) -> Optional[int]:
    z = _top_generator(lat.z(r, p), p, n)
    target = _top_generator(lat.z(r, p - r), p - r, n)
    if z is None or target is None:
        return None
    image = il.matvec(lat.m, z)[p - r]
    q, rem = divmod(image, target[p - r])
    return q if rem == 0 else None


# ---------------------------------------------------------------------------
# Diagonal sweep


@dataclass(frozen=True)
class SweepState:
    r: int
    matrix: Tuple[Tuple[int, ...], ...]
    marks: Dict[Tuple[int, int], str] = field(default_factory=dict)


@dataclass
class SweepResult:
    states: List[SweepState]
    pages: List[Page]
    differentials: List[DifferentialRecord]
    pivots: List[Tuple[int, int, int, int]]  # (r, row, col, value)


def sssa(complex_: ChainComplex, filtration: Filtration, r_max: Optional[int] = None) -> SweepResult:
    m = _ordered_matrix(complex_, filtration)
    n = len(m)
    r_max = n if r_max is None else r_max
    row_pivot: Dict[int, int] = {}
    col_pivot: Dict[int, int] = {}
    marks: Dict[Tuple[int, int], str] = {}
    pivots: List[Tuple[int, int, int, int]] = []
    states = [SweepState(0, tuple(map(tuple, m)), {})]
    for r in range(1, n):
        for j in range(r, n):
            i = j - r
            v = m[i][j]
            if not v:
                continue
            if i in row_pivot:
                jp = row_pivot[i]
                q, rem = divmod(v, m[i][jp])
                if rem:
                    raise SweepError(f"entry {v} at ({i},{j}) is not a multiple of pivot {m[i][jp]} at ({i},{jp})")
                # basis change h_j <- h_j - q h_jp, applied as a similarity
                for row in m:
                    row[j] -= q * row[jp]
                m[jp] = [a + q * b for a, b in zip(m[jp], m[j])]
                marks[(i, j)] = CHANGE_OF_BASIS
            elif j in col_pivot:
                marks[(i, j)] = PLAIN
            else:
                row_pivot[i] = j
                col_pivot[j] = i
                marks[(i, j)] = PRIMARY
                pivots.append((r, i, j, v))
        states.append(SweepState(r, tuple(map(tuple, m)), dict(marks)))

    pages = []
    for r in range(r_max + 1):
        ranks = [1] * n
        torsion = {}
        for pr, i, j, v in pivots:
            if pr < r:
                ranks[i] = ranks[j] = 0
                if abs(v) > 1:
                    torsion[i] = (abs(v),)
        pages.append(Page(r, tuple(ranks), tuple(sorted(torsion.items()))))
    diffs = sorted(DifferentialRecord(r, j, i, v) for r, i, j, v in pivots if r <= r_max)
    return SweepResult(states, pages, diffs, pivots)


@dataclass
class CrossValidation:
    ok: bool
    message: str = ""
    dump: str = ""


def cross_validate(complex_: ChainComplex, filtration: Filtration,
                   r_max: Optional[int] = None) -> CrossValidation:
    o_pages, o_diffs = oracle_pages(complex_, filtration, r_max)
    sweep = sssa(complex_, filtration, r_max)
    for a, b in zip(o_pages, sweep.pages):
        if a != b:
            bad = [p for p in range(len(a.ranks)) if a.ranks[p] != b.ranks[p]]
            return CrossValidation(False, f"page E^{a.r} differs at positions {bad or 'torsion'}",
                                   _dump(complex_, filtration, o_pages, o_diffs, sweep))
    if sorted(o_diffs) != sorted(sweep.differentials):
        missing = sorted(set(o_diffs) - set(sweep.differentials))
        extra = sorted(set(sweep.differentials) - set(o_diffs))
        return CrossValidation(False, f"differentials differ: oracle only {missing}, sweep only {extra}",
                               _dump(complex_, filtration, o_pages, o_diffs, sweep))
    return CrossValidation(True)


def _dump(complex_, filtration, o_pages, o_diffs, sweep) -> str:
    lines = ["order: " + " ".join(str(g) for g in filtration.order), "matrix:"]
    lines += ["  " + " ".join(f"{x:+d}" if x else " 0" for x in row)
              for row in _ordered_matrix(complex_, filtration)]
    lines.append("oracle pages:")
    lines += [f"  E^{p.r}: {p.ranks} {p.torsion or ''}" for p in o_pages]
    lines.append(f"oracle differentials: {o_diffs}")
    lines.append("sweep pages:")
    lines += [f"  E^{p.r}: {p.ranks} {p.torsion or ''}" for p in sweep.pages]
    lines.append(f"sweep pivots: {sweep.pivots}")
    return "\n".join(lines)


def infinity_ranks(pages: Sequence[Page], filtration: Filtration) -> Tuple[int, int, int]:
    """Grade-wise totals of the last page."""
    out = [0, 0, 0]
    last = pages[-1]
    for p, rank in enumerate(last.ranks):
        out[filtration.grade(p)] += rank
    return tuple(out)
