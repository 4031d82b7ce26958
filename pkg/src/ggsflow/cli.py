"""Command line front end: ``ggsflow <command> <pair-file> [options]``.

Exit status is 0 on success, 1 when the input fails parsing or validation
(or a check fails), and 2 for usage and I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import io
from .cancel import CancellationError, check_conservation, run_to_core
from .chain import (ComplexError, build_complex, check_d2, check_lemma_cone,
                    check_structure, homology)
from .model import Generator, nature_warnings, validate_condition_H
from .morse import LiftError, expand, to_dot, validate_lift
from .randomized import random_complexes
from .spectral import (FiltrationError, SweepError, cross_validate,
                       finest_filtration, infinity_ranks, oracle_pages, sssa)

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str, validate: bool = True):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return io.parse_pair(text, validate=validate)
    except io.ParseError as exc:
        raise _Fail(EXIT_INVALID, f"{path}: {exc}") from None
    except io.ValidationError as exc:
        lines = [f"{path}: invalid pair"] + [f"  {v}" for v in exc.violations]
        raise _Fail(EXIT_INVALID, "\n".join(lines)) from None


def _order_from(path: Optional[str]) -> Optional[List[Generator]]:
    """Generator order taken from the ``order`` directives of a file."""
    if path is None:
        return None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror or exc}") from None
    order: List[Generator] = []
    for raw in text.splitlines():
        toks = raw.split("#", 1)[0].split()
        if toks and toks[0] == "order":
            try:
                order.extend(Generator.parse(t) for t in toks[1:])
            except ValueError as exc:
                raise _Fail(EXIT_INVALID, f"{path}: {exc}") from None
    if not order:
        raise _Fail(EXIT_INVALID, f"{path}: no order directive")
    return order


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot write {path}: {exc.strerror or exc}") from None


def _complex(pair, order):
    try:
        c = build_complex(pair, order=order)
        return c, finest_filtration(c, order)
    except (ComplexError, FiltrationError) as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None
    except (KeyError, ValueError) as exc:
        raise _Fail(EXIT_INVALID, f"bad generator order: {exc}") from None


def cmd_validate(args) -> int:
    pair = _load(args.file, validate=False)
    problems = validate_condition_H(pair)
    lift_problems = []
    graph = None
    if not problems:
        try:
            graph, lifts = expand(pair)
            lift_problems = validate_lift(pair, graph, lifts)
        except LiftError as exc:
            lift_problems = [str(exc)]
    warnings = nature_warnings(pair)
    if args.dot and graph is not None:
        _write(args.dot, to_dot(graph, pair.name))
    if args.format == "json":
        print(io.dumps({"pair": pair.name,
                        "condition_H": [str(v) for v in problems],
                        "lift": [str(v) for v in lift_problems],
                        "warnings": warnings}))
    else:
        print(f"pair {pair.name}: {len(pair.singularities)} singularities, {len(pair.lines)} flow lines")
        print("condition H: " + ("ok" if not problems else f"{len(problems)} violation(s)"))
        for v in problems:
            print(f"  {v}")
        print("lift data: " + ("ok" if not lift_problems and not problems
                              else "not checked" if problems else f"{len(lift_problems)} violation(s)"))
        for v in lift_problems:
            print(f"  {v}")
        for w in warnings:
            print(f"warning: {w}")
    return EXIT_OK if not problems and not lift_problems else EXIT_INVALID


def cmd_complex(args) -> int:
    pair = _load(args.file)
    c, _ = _complex(pair, _order_from(args.order))
    if args.dot:
        graph, _ = expand(pair)
        _write(args.dot, to_dot(graph, pair.name))
    ok, witness = check_d2(c)
    structure = check_structure(c) if pair.orientable else []
    cone = check_lemma_cone(c, pair)
    if args.format == "json":
        doc = io.complex_to_json(c)
        doc.update({"d_squared_zero": ok,
                    "witness": None if ok else [str(witness[0]), str(witness[1]), witness[2]],
                    "structure": [str(v) for v in structure],
                    "saddle_cone": [str(v) for v in cone]})
        print(io.dumps(doc))
    else:
        print(io.render_matrix(c), end="")
        print("d^2 = 0" if ok else f"d^2 != 0: entry {witness[2]} at ({witness[0]}, {witness[1]})")
        for v in structure + cone:
            print(f"  {v}")
    return EXIT_OK if ok and not structure and not cone else EXIT_INVALID


def cmd_spectral(args) -> int:
    pair = _load(args.file)
    c, filtration = _complex(pair, _order_from(args.order))
    r_max = args.rmax if args.rmax is not None else c.size
    if args.oracle:
        pages, diffs = oracle_pages(c, filtration, r_max)
    else:
        try:
            sweep = sssa(c, filtration, r_max)
        except SweepError as exc:
            raise _Fail(EXIT_INVALID, str(exc)) from None
        pages, diffs = sweep.pages, sweep.differentials
    if args.format == "json":
        print(io.dumps(io.pages_to_json(pages, diffs, filtration)))
    else:
        print(io.render_pages(pages, diffs, filtration), end="")
        print("E^inf by index: " + ", ".join(f"k={k}: {v}" for k, v in enumerate(infinity_ranks(pages, filtration))))
    return EXIT_OK


def cmd_cancel(args) -> int:
    pair = _load(args.file)
    try:
        trace = run_to_core(pair, _order_from(args.order))
    except (CancellationError, FiltrationError, SweepError) as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None
    problems = check_conservation(trace)
    if args.dot:
        _write(args.dot, _trace_dot(trace))
    if args.format == "json":
        print(io.dumps(io.trace_to_json(trace, problems)))
    else:
        print(f"initial complex ({trace.complex.size} generators):")
        print(io.render_matrix(trace.complex), end="")
        for n, step in enumerate(trace.steps, start=1):
            print(f"\nstep {n}: {step.event.describe()}")
            for w in step.event.warnings:
                print(f"  warning: {w}")
            print(io.render_matrix(step.complex), end="")
        final = trace.final_pair
        print(f"\n{len(trace.steps)} cancellation(s); core flow: {'yes' if trace.core_flow else 'no'}")
        for s in final.singularities:
            print(f"  {s.id}: {s.kind}, nature {s.nature}")
        print("conservation: " + ("ok" if not problems else f"{len(problems)} violation(s)"))
        for v in problems:
            print(f"  {v}")
    return EXIT_OK if not problems else EXIT_INVALID


def _trace_dot(trace) -> str:
    out = [f'digraph "{trace.pair.name}-trace" {{']
    for n, step in enumerate(trace.steps, start=1):
        succ = f"{step.event.successor.id}@{n}"
        out.append(f'  "{succ}" [label="{step.event.successor.id}\\n{step.event.successor.kind}"];')
        for s in step.event.consumed:
            out.append(f'  "{s.id}" -> "{succ}" [label="r={step.event.r}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_homology(args) -> int:
    pair = _load(args.file)
    c, _ = _complex(pair, _order_from(args.order))
    h = homology(c)
    if args.format == "json":
        print(io.dumps(io.homology_to_json(h)))
    else:
        print(h)
    return EXIT_OK


def cmd_harness(args) -> int:
    failures = []
    for n, c in enumerate(random_complexes(args.seed, args.count, args.max_size)):
        f = finest_filtration(c)
        report = cross_validate(c, f)
        pages, _ = oracle_pages(c, f)
        if not report.ok:
            failures.append(f"instance {n}: {report.message}\n{report.dump}")
        elif infinity_ranks(pages, f) != homology(c).betti:
            failures.append(f"instance {n}: E^inf differs from homology")
    if args.format == "json":
        print(io.dumps({"seed": args.seed, "instances": args.count, "failures": failures}))
    else:
        for msg in failures:
            print(msg)
        print(f"seed {args.seed}: {args.count - len(failures)}/{args.count} instances agree")
    return EXIT_OK if not failures else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ggsflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file=True):
        p = sub.add_parser(name, help=help_text)
        if file:
            p.add_argument("file", help="pair file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check condition H and the lift data")
    p.add_argument("--dot", metavar="PATH", help="write the Morse graph as DOT")
    p = add("complex", cmd_complex, "print the boundary matrix and its checks")
    p.add_argument("--order", metavar="FILE", help="take the generator order from this file")
    p.add_argument("--dot", metavar="PATH", help="write the Morse graph as DOT")
    p = add("spectral", cmd_spectral, "print the spectral sequence pages")
    p.add_argument("--order", metavar="FILE")
    p.add_argument("--rmax", type=int, metavar="N", help="last page (default: number of generators)")
    p.add_argument("--oracle", action="store_true", help="use the definition-based computation")
    p = add("cancel", cmd_cancel, "cancel down to a core flow")
    p.add_argument("--order", metavar="FILE")
    p.add_argument("--dot", metavar="PATH", help="write the cancellation graph as DOT")
    p = add("homology", cmd_homology, "print Betti numbers and torsion")
    p.add_argument("--order", metavar="FILE")
    p = add("harness", cmd_harness, "compare sweep and oracle on random complexes", file=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--max-size", type=int, default=12)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rmax", None) is not None and args.rmax < 0:
        parser.error("--rmax must be non-negative")
    try:
        return args.func(args)
    except _Fail as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
