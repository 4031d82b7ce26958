"""Combinatorial morsification: lift a GGS pair to a signed Morse graph.

The lift is not synthesized.  Lift counts and edge signs come from the pair's
annotations (the per-line ``lifts`` signs and the per-singularity
``lift_count``); this module expands them into critical points and edges and
checks that the result behaves like a Morse-Smale complex.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .intlinalg import matmul
from .model import (CrossCap, FOLD_PART, GGSPair, Generator, Violation,
                    default_order)


class LiftError(ValueError):
    """The lift data cannot be expanded without guessing."""


@dataclass(frozen=True, order=True)
class CriticalPoint:
    generator: Generator
    copy: int

    @property
    def index(self) -> int:
        return self.generator.k

    @property
    def name(self) -> str:
        return f"{self.generator}#{self.copy}"


@dataclass(frozen=True)
class MorseEdge:
    src: CriticalPoint
    dst: CriticalPoint
    sign: int
    line: str


@dataclass(frozen=True)
class MorseGraph:
    points: Tuple[CriticalPoint, ...]
    edges: Tuple[MorseEdge, ...]


@dataclass(frozen=True)
class LiftMap:
    lift: Dict[Generator, Tuple[CriticalPoint, ...]]
    project: Dict[CriticalPoint, Generator]


def lift_count(pair: GGSPair, g: Generator) -> int:
    """Number of critical points a generator lifts to."""
    s = pair.sing(g.sing)
    if pair.is_saddle_cone_generator(g):
        return 2
    if any(isinstance(c, CrossCap) for c in s.kind.components()) and g.k != 1:
        if s.lift_count is not None:
            return s.lift_count
        if isinstance(s.kind, CrossCap) and s.kind.n >= 3 and _touches_fold(pair, g):
            raise LiftError(f"singularity {s.id}: cross-cap {s.kind} with fold lines needs a lifts= annotation")
        return 1
    return 1


def _touches_fold(pair: GGSPair, g: Generator) -> bool:
    return any(line.part == FOLD_PART and g in (line.src, line.dst) for line in pair.lines)


def expand(pair: GGSPair) -> Tuple[MorseGraph, LiftMap]:
    order = default_order(pair)
    rank = {s.id: i for i, s in enumerate(pair.singularities)}
    copies = {g: lift_count(pair, g) for g in order}
    points = sorted(
        (CriticalPoint(g, c) for g in order for c in range(copies[g])),
        key=lambda p: (p.index, rank[p.generator.sing], p.generator.slot, p.copy),
    )
    lift = {g: tuple(CriticalPoint(g, c) for c in range(copies[g])) for g in order}
    project = {p: p.generator for p in points}
    edges = []
    for line in pair.lines:
        for j, sign in enumerate(line.lifts):
            src = CriticalPoint(line.src, min(j, copies[line.src] - 1))
            dst = CriticalPoint(line.dst, min(j, copies[line.dst] - 1))
            edges.append(MorseEdge(src, dst, sign, line.id))
    return MorseGraph(tuple(points), tuple(edges)), LiftMap(lift, project)


def morse_boundary(graph: MorseGraph) -> List[List[int]]:
    """Entry ``(p, q)`` is the signed count of edges from ``q`` down to ``p``."""
    pos = {p: i for i, p in enumerate(graph.points)}
    n = len(graph.points)
    out = [[0] * n for _ in range(n)]
    for e in graph.edges:
        out[pos[e.dst]][pos[e.src]] += e.sign
    return out


def validate_lift(pair: GGSPair, graph: MorseGraph, lifts: LiftMap) -> List[Violation]:
    out: List[Violation] = []
    d = morse_boundary(graph)
    sq = matmul(d, d)
    for i, row in enumerate(sq):
        for j, v in enumerate(row):
            if v:
                out.append(Violation(
                    "morse-d2", f"(d^m)^2 has entry {v} from {graph.points[j].name} to {graph.points[i].name}"))

    if pair.orientable:
        ins: Dict[CriticalPoint, List[int]] = {}
        outs: Dict[CriticalPoint, List[int]] = {}
        for e in graph.edges:
            outs.setdefault(e.src, []).append(e.sign)
            ins.setdefault(e.dst, []).append(e.sign)
        for p in graph.points:
            if p.index != 1:
                continue
            for label, signs in (("unstable", outs.get(p, [])), ("stable", ins.get(p, []))):
                if len(signs) > 2:
                    out.append(Violation("orientation", f"{p.name} has {len(signs)} {label} edges"))
                elif len(signs) == 2 and signs[0] == signs[1]:
                    out.append(Violation("orientation", f"{p.name}: both {label} edges carry sign {signs[0]:+d}"))

    for g, pts in lifts.lift.items():
        if not pts:
            out.append(Violation("round-trip", f"{g} has no lifted critical point"))
        for p in pts:
            if lifts.project.get(p) != g:
                out.append(Violation("round-trip", f"{p.name} does not project back to {g}"))
    return out


def to_dot(graph: MorseGraph, name: str = "morse") -> str:
    lines = [f'digraph "{name}" {{']
    for p in graph.points:
        lines.append(f'  "{p.name}" [label="{p.name}\\nindex {p.index}"];')
    for e in graph.edges:
        lines.append(f'  "{e.src.name}" -> "{e.dst.name}" [label="{e.sign:+d}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
