"""Cancellation of generator pairs and the reduction of a pair to a core flow.

A cancellation removes a pivot pair ``(hi, lo)`` of consecutive generators,
folds the hosting singularities of ``hi``, ``lo`` and a partner generator into
one successor singularity, and updates the boundary matrix by Gaussian
elimination on the pivot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chain import ChainComplex, build_complex, homology, line_contribution
from .model import (Cone, FlowLine, FoldArc, GGSPair, Generator, Kind, Nature,
                    Singularity, Violation, concat, cone, expected_lift_arity,
                    wedge)
from .spectral import Filtration, SweepResult, finest_filtration, sssa


class CancellationError(ValueError):
    pass


@dataclass(frozen=True)
class CancellationEvent:
    r: Optional[int]
    hi: Generator
    lo: Generator
    partner: Generator
    pivot: int
    merged: Generator
    successor: Singularity
    consumed: Tuple[Singularity, Singularity, Singularity]
    warnings: Tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return self.hi.k

    def describe(self) -> str:
        x1, x2, x3 = (s.id for s in self.consumed)
        head = f"r={self.r}: " if self.r is not None else ""
        return (f"{head}cancel {self.hi} with {self.lo} (entry {self.pivot:+d}), partner {self.partner}; "
                f"{x1}, {x2}, {x3} -> {self.successor.id} "
                f"[{self.successor.kind}, nature {self.successor.nature}]")


@dataclass
class TraceStep:
    event: CancellationEvent
    pair: GGSPair
    complex: ChainComplex


@dataclass
class ReductionTrace:
    pair: GGSPair
    complex: ChainComplex
    filtration: Filtration
    sweep: SweepResult
    steps: List[TraceStep] = field(default_factory=list)

    @property
    def events(self) -> List[CancellationEvent]:
        return [s.event for s in self.steps]

    @property
    def final_pair(self) -> GGSPair:
        return self.steps[-1].pair if self.steps else self.pair

    @property
    def final_complex(self) -> ChainComplex:
        return self.steps[-1].complex if self.steps else self.complex

    @property
    def core_flow(self) -> bool:
        return self.final_complex.is_zero()

    def snapshots(self) -> List[Tuple[GGSPair, ChainComplex]]:
        return [(self.pair, self.complex)] + [(s.pair, s.complex) for s in self.steps]


def find_partner(complex_: ChainComplex, hi: Generator, lo: Generator) -> Generator:
    """The other generator sharing the pivot's row (index-2 pivot) or column
    (index-1 pivot)."""
    m = complex_.matrix
    i, j = complex_.index(lo), complex_.index(hi)
    if not m[i, j]:
        raise CancellationError(f"entry ({lo}, {hi}) is zero")
    if hi.k == 2:
        others = [c for c in complex_.grade(2) if c != j and m[i, c]]
    elif hi.k == 1:
        others = [r for r in complex_.grade(0) if r != i and m[r, j]]
    else:
        raise CancellationError(f"{hi} has no lower generator")
    if not others:
        raise CancellationError(f"pivot ({lo}, {hi}) has no partner entry")
    if len(others) > 1:
        names = ", ".join(str(complex_.generators[x]) for x in others)
        raise CancellationError(f"pivot ({lo}, {hi}) has several partner candidates: {names}")
    return complex_.generators[others[0]]


def _roles(hi: Generator, lo: Generator, partner: Generator) -> Tuple[str, str, str]:
    if hi.k == 2:
        return hi.sing, lo.sing, partner.sing
    return lo.sing, hi.sing, partner.sing


def successor_kind(x1: Kind, saddle: Kind, x3: Kind) -> Kind:
    """Kind left after contracting the path ``x1 -> saddle <- x3``."""
    if saddle.is_regular:
        if isinstance(x1, Cone) and not x3.is_regular:
            return wedge(cone(x1.n - 1), x3)
        if isinstance(x3, Cone) and not x1.is_regular:
            return wedge(x1, cone(x3.n - 1))
        return concat(x1, x3)
    if isinstance(saddle, Cone):
        joined = wedge(x1, x3)
        return joined if saddle.n == 2 else wedge(joined, cone(saddle.n - 2))
    return concat(x1, concat(saddle, x3))


def _letter_offset(s: Singularity, g: Generator) -> int:
    return s.nature.positions(g.k)[g.slot - 1]


def succession(x1: Singularity, x2: Singularity, x3: Singularity,
               hi: Generator, lo: Generator) -> Tuple[Kind, Nature]:
    """Kind and nature of the singularity replacing ``x1, x2, x3`` when ``hi``
    and ``lo`` cancel; ``x2`` must host the index-1 generator of the pair."""
    saddle_gen = hi if hi.k == 1 else lo
    other_gen = lo if hi.k == 1 else hi
    if saddle_gen.sing != x2.id or saddle_gen.k != 1:
        raise CancellationError(f"{x2.id} must host the index-1 generator, got {saddle_gen}")
    if other_gen.sing != x1.id:
        raise CancellationError(f"{x1.id} must host {other_gen}")
    if len({x1.id, x2.id, x3.id}) != 3:
        raise CancellationError(f"cancellation needs three distinct singularities, got {x1.id}, {x2.id}, {x3.id}")
    for s, g in ((x1, other_gen), (x2, saddle_gen)):
        if not 1 <= g.slot <= s.eta(g.k):
            raise CancellationError(f"{g} is not a generator of {s.id} (nature {s.nature})")
    drop1 = _letter_offset(x1, other_gen)
    drop2 = _letter_offset(x2, saddle_gen)
    letters = ([x for i, x in enumerate(x1.nature.letters) if i != drop1]
               + [x for i, x in enumerate(x2.nature.letters) if i != drop2]
               + list(x3.nature.letters))
    return successor_kind(x1.kind, x2.kind, x3.kind), Nature(tuple(letters))


def _successor_id(pair: GGSPair, x1: Singularity, x2: Singularity, x3: Singularity,
                  hi: Generator, lo: Generator) -> str:
    saddle_keeps = sum(x2.nature.numbers()) > 1
    base = x2.id if saddle_keeps else (lo if hi.k == 1 else hi).sing
    new = base if base.endswith("'") else base + "'"
    taken = {s.id for s in pair.singularities} - {x1.id, x2.id, x3.id}
    while new in taken:
        new += "'"
    return new


def _rename_map(x1: Singularity, x2: Singularity, x3: Singularity, hi: Generator,
                lo: Generator, new_id: str) -> Dict[Generator, Generator]:
    """Surviving generators of the three hosts, renumbered in word order."""
    counters = {0: 0, 1: 0, 2: 0}
    out = {}
    for s in (x1, x2, x3):
        for k in (0, 1, 2):
            for slot in range(1, s.eta(k) + 1):
                g = Generator(s.id, k, slot)
                if g in (hi, lo):
                    continue
                counters[k] += 1
                out[g] = Generator(new_id, k, counters[k])
    return out


def _eliminate(c: ChainComplex, hi: Generator, lo: Generator, rename: Dict[Generator, Generator]) -> ChainComplex:
    m = c.as_lists()
    i, j = c.index(lo), c.index(hi)
    v = m[i][j]
    keep = [x for x in range(c.size) if x not in (i, j)]
    out = []
    for a in keep:
        row = []
        for b in keep:
            num = m[a][j] * m[i][b]
            if num % v:
                raise CancellationError(f"pivot {v} does not divide the update at ({c.generators[a]}, {c.generators[b]})")
            row.append(m[a][b] - num // v)
        out.append(row)
    gens = tuple(rename.get(c.generators[x], c.generators[x]) for x in keep)
    return ChainComplex(gens, np.array(out, dtype=np.int64).reshape(len(keep), len(keep)))


def _rewrite_lines(pair: GGSPair, shell: GGSPair, hi: Generator, lo: Generator,
                   partner: Generator, factor: int, rename: Dict[Generator, Generator]) -> List[FlowLine]:
    """Flow lines of the successor pair.  Lines at the cancelled generators are
    dropped, except those that elimination moves onto the partner."""
    lines = []
    for line in pair.lines:
        src, dst, scale = line.src, line.dst, 1
        if {hi, lo} & {src, dst}:
            if hi.k == 2 and src == hi and dst != lo:
                src, scale = partner, factor
            elif hi.k == 1 and dst == lo and src != hi:
                dst, scale = partner, factor
            else:
                continue
        src, dst = rename.get(src, src), rename.get(dst, dst)
        moved = FlowLine(line.id, src, dst, line.part, tuple(scale * x for x in line.lifts))
        arity = expected_lift_arity(moved, shell)
        if arity != len(moved.lifts):
            value = line_contribution(line, pair) * scale
            if value == 0 and arity == 1:
                continue
            if abs(value) > 1:
                raise CancellationError(f"line {line.id} carries coefficient {value}")
            lifts = (value,) if arity == 1 else ((value, value) if value else (1, -1))
            moved = FlowLine(line.id, src, dst, line.part, lifts)
        lines.append(moved)
    return lines


def apply_cancellation(pair: GGSPair, complex_: ChainComplex, hi: Generator, lo: Generator,
                       r: Optional[int] = None) -> Tuple[GGSPair, ChainComplex, CancellationEvent]:
    if hi.k != lo.k + 1 or hi.k not in (1, 2):
        raise CancellationError(f"{hi} and {lo} are not consecutive generators")
    v = complex_.entry(lo, hi)
    if abs(v) != 1:
        raise CancellationError(f"entry ({lo}, {hi}) = {v}, a cancellation needs +1 or -1")
    partner = find_partner(complex_, hi, lo)
    ids = _roles(hi, lo, partner)
    if len(set(ids)) != 3:
        raise CancellationError(f"{hi}, {lo} and partner {partner} must live on three distinct singularities")
    x1, x2, x3 = (pair.sing(x) for x in ids)
    kind, nature = succession(x1, x2, x3, hi, lo)
    new_id = _successor_id(pair, x1, x2, x3, hi, lo)
    successor = Singularity(new_id, kind, nature)
    rename = _rename_map(x1, x2, x3, hi, lo, new_id)

    new_complex = _eliminate(complex_, hi, lo, rename)

    consumed = {x1.id, x2.id, x3.id}
    first = min(pair.declaration_rank(x) for x in consumed)
    sings = [s for s in pair.singularities if s.id not in consumed]
    sings.insert(sum(1 for s in pair.singularities[:first] if s.id not in consumed), successor)
    folds = []
    for arc in pair.folds:
        a = new_id if arc.a in consumed else arc.a
        b = new_id if arc.b in consumed else arc.b
        if a == b or FoldArc(a, b) in folds or FoldArc(b, a) in folds:
            continue
        if new_id in (a, b) and kind.is_regular:
            continue
        folds.append(FoldArc(a, b))
    shell = GGSPair(pair.name, tuple(sings), (), tuple(folds), pair.orientable, new_complex.generators)
    if hi.k == 2:
        factor = -complex_.entry(lo, partner) // v
    else:
        factor = -complex_.entry(partner, hi) // v
    lines = _rewrite_lines(pair, shell, hi, lo, partner, factor, rename)
    new_pair = GGSPair(pair.name, shell.singularities, tuple(lines), shell.folds, pair.orientable,
                       new_complex.generators)

    rebuilt = build_complex(new_pair, validate=False)
    if rebuilt.nonzero() != new_complex.nonzero():
        raise CancellationError("line bookkeeping disagrees with the eliminated matrix")

    warnings = []
    if not kind.basic() and nature.has_saddle():
        warnings.append(f"{new_id} is a mixed saddle ({kind}, nature {nature})")
    event = CancellationEvent(r, hi, lo, partner, v, rename.get(partner, partner), successor,
                              (x1, x2, x3), tuple(warnings))
    return new_pair, new_complex, event


def run_to_core(pair: GGSPair, order: Optional[Sequence[Generator]] = None) -> ReductionTrace:
    """Cancel along the primary pivots of the sweep, diagonal by diagonal."""
    complex_ = build_complex(pair)
    filtration = finest_filtration(complex_, order)
    sweep = sssa(complex_, filtration)
    trace = ReductionTrace(pair, complex_, filtration, sweep)
    current: List[Optional[Generator]] = list(filtration.order)
    cur_pair, cur_complex = pair, complex_
    # within a diagonal, later columns first
    for r, i, j, _ in sorted(sweep.pivots, key=lambda t: (t[0], -t[2])):
        hi, lo = current[j], current[i]
        if hi is None or lo is None:
            raise CancellationError(f"pivot at positions ({i}, {j}) refers to a removed generator")
        cur_pair, cur_complex, event = apply_cancellation(cur_pair, cur_complex, hi, lo, r)
        x1, x2, x3 = event.consumed
        forward = _rename_map(x1, x2, x3, hi, lo, event.successor.id)
        current = [None if g in (hi, lo) else forward.get(g, g) for g in current]
        trace.steps.append(TraceStep(event, cur_pair, cur_complex))
    return trace


def check_conservation(trace: ReductionTrace) -> List[Violation]:
    out: List[Violation] = []
    snaps = trace.snapshots()
    for n, step in enumerate(trace.steps, start=1):
        ev = step.event
        before_pair, before_complex = snaps[n - 1]
        after_pair, after_complex = snaps[n]
        tag = f"event {n}"
        total = sum(s.kind.singular_number() for s in ev.consumed)
        got = ev.successor.kind.singular_number()
        if got != total:
            out.append(Violation("singular-number", f"{tag}: #s {got} != {total}"))
        for k in (0, 1, 2):
            expect = sum(s.eta(k) for s in ev.consumed)
            if k == ev.k or k == ev.k - 1:
                expect -= 1
            if ev.successor.eta(k) != expect:
                out.append(Violation("nature-number", f"{tag}: eta_{k} {ev.successor.eta(k)} != {expect}"))
        if before_pair.total_singular_number() != after_pair.total_singular_number():
            out.append(Violation("singular-number", f"{tag}: pair total #s changed"))
        h0, h1 = homology(before_complex), homology(after_complex)
        if h0 != h1:
            out.append(Violation("homology", f"{tag}: {h0} became {h1}"))
        if before_complex.size - after_complex.size != 2:
            out.append(Violation("generator-count", f"{tag}: {before_complex.size} -> {after_complex.size}"))
        if len(before_pair.singularities) - len(after_pair.singularities) != 2:
            out.append(Violation("singularity-count",
                                 f"{tag}: {len(before_pair.singularities)} -> {len(after_pair.singularities)}"))
    return out
