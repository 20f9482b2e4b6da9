"""Plain versus robust composition on a shop with two payment branches.

The voucher branch needs a Voucher that nothing can produce.  In plain
mode the engine leaves that branch inactive and still reaches the Receipt
goal through the card branch.  Robust mode demands that every fragment
element can be active, so the same problem becomes unsatisfiable.

    python3 demos/robust_mode.py
"""

from __future__ import annotations

from dataclasses import replace
from importlib import resources

from wfcompose import Unsatisfiable, compose
from wfcompose.io import parse_problem


def main():
    problem = parse_problem(resources.files("wfcompose").joinpath("data/robust_merge.json").read_text())
    sol = compose(problem)
    off = [m.name for m in sol.graph.messages.values() if m.active is False]
    print(f"plain mode: solved with {len(sol.added_activities())} added activities")
    print(f"  discarded path: {', '.join(off)}")

    robust = replace(problem, policy=replace(problem.policy, robust=True))
    try:
        compose(robust)
        print("robust mode: solved (unexpected)")
    except Unsatisfiable as exc:
        print(f"robust mode: unsatisfiable after {exc.stats.nodes_explored} search nodes")


if __name__ == "__main__":
    main()
