"""Command-line front end.

Exit codes: ``validate`` 0 clean / 2 violations / 1 unreadable input;
``compose`` 0 solved / 3 unsatisfiable / 1 unreadable input;
``enumerate`` 0 unless the input is unreadable (1).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from .constraints import check_all, render
from .dot import emit_dot
from .io import ParseError, SemanticError, emit_solution, parse_document, parse_problem
from .problem import Problem
from .search import Unsatisfiable, compose, enumerate_solutions

OK, ERROR, VIOLATIONS, UNSAT = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wfcompose", description="Compose workflow fragments by bounded search.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check an instance or solution file")
    v.add_argument("path")
    for name, text in (("compose", "find the first solution"), ("enumerate", "list solutions")):
        c = sub.add_parser(name, help=text)
        c.add_argument("path")
        c.add_argument("--all", action="store_true", help="enumerate instead of stopping at the first")
        c.add_argument("--robust", action="store_true", help="require every element to be active")
        c.add_argument("--max-add", type=int, metavar="N", help="bound on added activities and messages")
        c.add_argument("--dot", metavar="PATH", help="also write a Graphviz rendering")
        c.add_argument("--out", metavar="PATH", help="write the solution here instead of stdout")
        c.add_argument("--quiet", action="store_true", help="no timing on stderr")
    return ap


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _override(problem: Problem, args) -> Problem:
    if args.robust:
        problem = dataclasses.replace(problem, policy=dataclasses.replace(problem.policy, robust=True))
    if args.max_add is not None:
        if args.max_add < 0:
            raise SemanticError("--max-add must be non-negative")
        bounds = dataclasses.replace(problem.bounds, max_added_activities=args.max_add,
                                     max_added_messages=args.max_add)
        problem = dataclasses.replace(problem, bounds=bounds)
    return problem


def _validate(args) -> int:
    doc = parse_document(_read(args.path), instance=True)
    g = doc.graph
    violations = check_all(g, g.ontology, doc.policy, doc.catalog)
    sys.stdout.write(render(violations))
    return VIOLATIONS if violations else OK


def _solve(args) -> int:
    problem = _override(parse_problem(_read(args.path)), args)
    t0 = time.perf_counter()
    if args.command == "compose" and not args.all:
        try:
            sols = [compose(problem)]
        except Unsatisfiable as exc:
            print(f"unsatisfiable within bounds ({exc.stats.nodes_explored} nodes explored)", file=sys.stderr)
            return UNSAT
    else:
        sols = enumerate_solutions(problem)
    elapsed = int((time.perf_counter() - t0) * 1000)
    _write(args.out, "---\n".join(emit_solution(s) for s in sols))
    if args.dot:
        _write(args.dot, "".join(emit_dot(s.graph) for s in sols))
    if not args.quiet:
        print(f"{len(sols)} solution(s), elapsedMs={elapsed}", file=sys.stderr)
    return OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _validate(args)
        return _solve(args)
    except (ParseError, SemanticError) as exc:
        print(f"{args.path}: {exc}", file=sys.stderr)
        return ERROR
    except OSError as exc:
        print(f"{exc}", file=sys.stderr)
        return ERROR
