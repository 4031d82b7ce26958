"""Pair files, JSON documents and text rendering."""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .chain import ChainComplex, HomologyResult
from .model import (FOLD_PART, REGULAR_PART, FlowLine, FoldArc, GGSPair,
                    Generator, KindError, Nature, NatureError, Singularity,
                    Violation, parse_kind, validate_condition_H)
from .spectral import DifferentialRecord, Filtration, Page


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class ValidationError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


# ---------------------------------------------------------------------------
# Pair file text

_FILE_LETTERS = {"a": "a", "s": "s", "ss": "s_s", "su": "s_u", "r": "r"}
_FILE_TOKEN = re.compile(r"(ss|su|a|s|r)(\d+)?")


def parse_file_nature(text: str) -> Nature:
    """Nature in file syntax: ``a|s|ss|su|r`` tokens, each with an optional
    exponent, so ``ss`` is one stable-saddle letter and ``s2`` two saddles."""
    letters: List[str] = []
    pos = 0
    while pos < len(text):
        m = _FILE_TOKEN.match(text, pos)
        if not m:
            raise NatureError(f"bad nature token at offset {pos} in {text!r}")
        count = int(m.group(2)) if m.group(2) else 1
        if count < 1:
            raise NatureError(f"exponent must be positive in {text!r}")
        letters.extend([_FILE_LETTERS[m.group(1)]] * count)
        pos = m.end()
    if not letters:
        raise NatureError("empty nature")
    return Nature(tuple(letters))


def format_file_nature(nature: Nature) -> str:
    back = {v: k for k, v in _FILE_LETTERS.items()}
    runs = []
    for x in nature.letters:
        if runs and runs[-1][0] == x:
            runs[-1][1] += 1
        else:
            runs.append([x, 1])
    out = []
    for idx, (x, count) in enumerate(runs):
        tok = back[x]
        nxt = runs[idx + 1][0] if idx + 1 < len(runs) else None
        # a lone "s" followed by another s-token would merge into "ss"/"su"
        if count > 1 or (tok == "s" and nxt in ("s_s", "s_u")):
            tok += str(count)
        out.append(tok)
    return "".join(out)


def _tokens(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.group(0), m.start() + 1


def _key_values(tokens, lineno, allowed, required):
    out = {}
    for tok, col in tokens:
        if "=" not in tok:
            raise ParseError(lineno, col, f"expected key=value, got {tok!r}")
        key, value = tok.split("=", 1)
        if key not in allowed:
            raise ParseError(lineno, col, f"unknown key {key!r}")
        if key in out:
            raise ParseError(lineno, col, f"duplicate key {key!r}")
        out[key] = (value, col + len(key) + 1)
    for key in required:
        if key not in out:
            raise ParseError(lineno, 1, f"missing {key}=")
    return out


def _generator(text: str, lineno: int, col: int) -> Generator:
    try:
        g = Generator.parse(text)
    except ValueError as exc:
        raise ParseError(lineno, col, str(exc)) from None
    if g.k not in (0, 1, 2) or g.slot < 1:
        raise ParseError(lineno, col, f"generator {text!r} needs k in 0..2 and slot >= 1")
    return g


def parse_pair(source: Union[str, Path], validate: bool = True) -> GGSPair:
    """Parse pair-file text, or the file behind a ``Path``."""
    text = source.read_text(encoding="utf-8") if isinstance(source, Path) else source
    name: Optional[str] = None
    sings: List[Singularity] = []
    lines: List[FlowLine] = []
    folds: List[FoldArc] = []
    order: Optional[List[Generator]] = None
    orientable = True

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip("\r")
        toks = list(_tokens(body))
        if not toks:
            continue
        head, hcol = toks[0]
        rest = toks[1:]
        if head == "pair":
            if name is not None:
                raise ParseError(lineno, hcol, "second pair directive")
            if len(rest) != 1:
                raise ParseError(lineno, hcol, "pair takes exactly one name")
            name = rest[0][0]
        elif head == "sing":
            if not rest:
                raise ParseError(lineno, hcol, "sing needs an id")
            sid = rest[0][0]
            kv = _key_values(rest[1:], lineno, {"kind", "nature", "lifts"}, ("kind", "nature"))
            try:
                kind = parse_kind(kv["kind"][0], strict=True)
            except KindError as exc:
                raise ParseError(lineno, kv["kind"][1], str(exc)) from None
            try:
                nature = parse_file_nature(kv["nature"][0])
            except NatureError as exc:
                raise ParseError(lineno, kv["nature"][1], str(exc)) from None
            count = None
            if "lifts" in kv:
                value, col = kv["lifts"]
                if not value.isdigit() or int(value) < 1:
                    raise ParseError(lineno, col, f"lifts must be a positive integer, got {value!r}")
                count = int(value)
            sings.append(Singularity(sid, kind, nature, count))
        elif head == "line":
            if not rest:
                raise ParseError(lineno, hcol, "line needs an id")
            lid = rest[0][0]
            kv = _key_values(rest[1:], lineno, {"src", "dst", "part", "lifts"}, ("src", "dst", "lifts"))
            src = _generator(kv["src"][0], lineno, kv["src"][1])
            dst = _generator(kv["dst"][0], lineno, kv["dst"][1])
            part, pcol = kv.get("part", (REGULAR_PART, 0))
            if part not in (REGULAR_PART, FOLD_PART):
                raise ParseError(lineno, pcol, f"part must be regular or fold, got {part!r}")
            value, col = kv["lifts"]
            try:
                signs = tuple(int(x) for x in value.split(","))
            except ValueError:
                raise ParseError(lineno, col, f"bad lift signs {value!r}") from None
            if not 1 <= len(signs) <= 2 or any(x not in (-1, 1) for x in signs):
                raise ParseError(lineno, col, f"lifts must be one or two of +1/-1, got {value!r}")
            lines.append(FlowLine(lid, src, dst, part, signs))
        elif head == "fold":
            if len(rest) != 2:
                raise ParseError(lineno, hcol, "fold takes two singularity ids")
            folds.append(FoldArc(rest[0][0], rest[1][0]))
        elif head == "order":
            order = (order or []) + [_generator(t, lineno, c) for t, c in rest]
        elif head == "orientable":
            if len(rest) != 1 or rest[0][0] not in ("true", "false"):
                raise ParseError(lineno, hcol, "orientable takes true or false")
            orientable = rest[0][0] == "true"
        else:
            raise ParseError(lineno, hcol, f"unknown directive {head!r}")

    if name is None:
        raise ParseError(1, 1, "no pair directive")
    pair = GGSPair(name, tuple(sings), tuple(lines), tuple(folds), orientable,
                   tuple(order) if order is not None else None)
    if validate:
        problems = validate_condition_H(pair)
        if problems:
            raise ValidationError(problems)
    return pair


def format_pair(pair: GGSPair) -> str:
    out = [f"pair {pair.name}"]
    if not pair.orientable:
        out.append("orientable false")
    for s in pair.singularities:
        extra = f" lifts={s.lift_count}" if s.lift_count is not None else ""
        out.append(f"sing {s.id} kind={s.kind} nature={format_file_nature(s.nature)}{extra}")
    for line in pair.lines:
        signs = ",".join(f"{x:+d}" for x in line.lifts)
        out.append(f"line {line.id} src={line.src} dst={line.dst} part={line.part} lifts={signs}")
    for arc in pair.folds:
        out.append(f"fold {arc.a} {arc.b}")
    if pair.order is not None:
        out.append("order " + " ".join(str(g) for g in pair.order))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON


def pair_to_json(pair: GGSPair) -> Dict[str, Any]:
    return {
        "name": pair.name,
        "orientable": pair.orientable,
        "singularities": [
            {"id": s.id, "kind": str(s.kind), "nature": list(s.nature.letters),
             **({"lifts": s.lift_count} if s.lift_count is not None else {})}
            for s in pair.singularities
        ],
        "lines": [
            {"id": l.id, "src": str(l.src), "dst": str(l.dst), "part": l.part, "lifts": list(l.lifts)}
            for l in pair.lines
        ],
        "folds": [[f.a, f.b] for f in pair.folds],
        "order": [str(g) for g in pair.order] if pair.order is not None else None,
    }


def pair_from_json(doc: Dict[str, Any]) -> GGSPair:
    sings = tuple(
        Singularity(s["id"], parse_kind(s["kind"], strict=False), Nature(tuple(s["nature"])), s.get("lifts"))
        for s in doc["singularities"]
    )
    lines = tuple(
        FlowLine(l["id"], Generator.parse(l["src"]), Generator.parse(l["dst"]), l["part"], tuple(l["lifts"]))
        for l in doc.get("lines", [])
    )
    folds = tuple(FoldArc(a, b) for a, b in doc.get("folds", []))
    order = doc.get("order")
    return GGSPair(doc["name"], sings, lines, folds, doc.get("orientable", True),
                   tuple(Generator.parse(g) for g in order) if order is not None else None)


def complex_to_json(c: ChainComplex) -> Dict[str, Any]:
    return {"generators": [str(g) for g in c.generators], "matrix": c.as_lists()}


def complex_from_json(doc: Dict[str, Any]) -> ChainComplex:
    gens = tuple(Generator.parse(g) for g in doc["generators"])
    return ChainComplex(gens, np.array(doc["matrix"], dtype=np.int64).reshape(len(gens), len(gens)))


def homology_to_json(h: HomologyResult) -> Dict[str, Any]:
    return {"betti": list(h.betti), "torsion": [list(t) for t in h.torsion]}


def pages_to_json(pages: Sequence[Page], diffs: Sequence[DifferentialRecord],
                  filtration: Filtration) -> Dict[str, Any]:
    return {
        "positions": [str(g) for g in filtration.order],
        "pages": [{"r": p.r, "ranks": list(p.ranks),
                   "torsion": {str(k): list(v) for k, v in p.torsion}} for p in pages],
        "differentials": [{"r": d.r, "source": d.source, "target": d.target, "value": d.value} for d in diffs],
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# Text rendering


def render_matrix(c: ChainComplex) -> str:
    """Labelled boundary matrix; columns are boundaries of the column generator."""
    labels = [str(g) for g in c.generators]
    if not labels:
        return "(empty complex: 0x0 matrix)\n"
    width = max(3, *(len(x) for x in labels))
    head = " " * width + " | " + " ".join(x.rjust(width) for x in labels)
    out = [head, "-" * len(head)]
    for i, label in enumerate(labels):
        cells = []
        for j in range(len(labels)):
            v = int(c.matrix[i, j])
            cells.append((f"{v:+d}" if v else "0").rjust(width))
        out.append(label.rjust(width) + " | " + " ".join(cells))
    return "\n".join(out) + "\n"


def render_pages(pages: Sequence[Page], diffs: Sequence[DifferentialRecord],
                 filtration: Filtration) -> str:
    n = len(filtration)
    width = 4
    out = ["positions: " + ", ".join(f"{p}={g}" for p, g in enumerate(filtration.order)),
           "     " + "".join(str(p).rjust(width) for p in range(n))]
    for page in pages:
        tors = dict(page.torsion)
        cells = []
        for p in range(n):
            if page.ranks[p]:
                cells.append("Z")
            elif p in tors:
                cells.append("Z/" + "x".join(map(str, tors[p])))
            else:
                cells.append(".")
        out.append(f"E^{page.r}".ljust(5) + "".join(x.rjust(width) for x in cells))
    if diffs:
        out.append("differentials:")
        for d in diffs:
            value = "?" if d.value is None else f"{d.value:+d}"
            out.append(f"  d^{d.r}_{d.source}: {d.source} -> {d.target}  ({value})")
    else:
        out.append("differentials: none")
    return "\n".join(out) + "\n"


def event_to_json(event) -> Dict[str, Any]:
    s = event.successor
    return {
        "r": event.r,
        "hi": str(event.hi),
        "lo": str(event.lo),
        "partner": str(event.partner),
        "pivot": event.pivot,
        "merged": str(event.merged),
        "consumed": [c.id for c in event.consumed],
        "successor": {"id": s.id, "kind": str(s.kind), "nature": list(s.nature.letters)},
        "warnings": list(event.warnings),
    }


def trace_to_json(trace, problems: Sequence[Violation] = ()) -> Dict[str, Any]:
    return {
        "pair": pair_to_json(trace.pair),
        "complex": complex_to_json(trace.complex),
        "steps": [{"event": event_to_json(s.event), "complex": complex_to_json(s.complex)}
                  for s in trace.steps],
        "final_pair": pair_to_json(trace.final_pair),
        "core_flow": trace.core_flow,
        "conservation": [str(v) for v in problems],
    }
