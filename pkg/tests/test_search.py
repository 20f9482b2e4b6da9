from __future__ import annotations

import random
from dataclasses import replace
from pathlib import Path

import pytest

from generators import random_problem
from wfcompose import (
    ActivityKind,
    Bounds,
    MalformedProblem,
    Unsatisfiable,
    check_all,
    compose,
    enumerate_solutions,
)
from wfcompose.canonical import canonical_key
from wfcompose.io import emit_solution, parse_problem

K = ActivityKind
DATA = Path(__file__).resolve().parents[1] / "src" / "wfcompose" / "data"


def load(name):
    return parse_problem((DATA / name).read_text())


def test_unsat_fixture_reports_stats():
    with pytest.raises(Unsatisfiable) as exc:
        compose(load("unsat.json"))
    assert exc.value.stats.nodes_explored >= 1
    assert enumerate_solutions(load("unsat.json")) == []


def test_solutions_satisfy_every_rule():
    prob = load("robust_merge.json")
    sols = enumerate_solutions(prob)
    assert sols
    for s in sols:
        assert check_all(s.graph, prob.ontology, prob.policy, prob.catalog) == []
        assert len(s.added_activities()) <= prob.bounds.max_added_activities
        assert len(s.added_messages()) <= prob.bounds.max_added_messages


def test_robust_mode_is_unsat_for_the_unproducible_branch():
    prob = load("robust_merge.json")
    with pytest.raises(Unsatisfiable):
        compose(replace(prob, policy=replace(prob.policy, robust=True)))


def test_zero_budget_cannot_compose():
    prob = load("robust_merge.json")
    with pytest.raises(Unsatisfiable):
        compose(replace(prob, bounds=Bounds(0, 0, 0, 1)))


def test_search_is_deterministic():
    a = [emit_solution(s) for s in enumerate_solutions(load("robust_merge.json"))]
    b = [emit_solution(s) for s in enumerate_solutions(load("robust_merge.json"))]
    assert a == b


def test_limit_caps_enumeration():
    prob = load("robust_merge.json")
    assert len(enumerate_solutions(prob, limit=1)) == 1


@pytest.mark.parametrize("seed", range(40))
def test_no_duplicate_solutions(seed):
    prob = random_problem(random.Random(seed))
    keys = [canonical_key(s.graph) for s in enumerate_solutions(prob)]
    assert len(keys) == len(set(keys))


def test_stats_count_the_additions():
    sol = compose(load("robust_merge.json"))
    assert sol.stats.added_activities == len(sol.added_activities())
    assert sol.stats.added_messages == len(sol.added_messages())


def test_fragments_are_not_mutated():
    prob = load("robust_merge.json")
    before = prob.fragments.copy()
    compose(prob)
    assert prob.fragments == before


def test_problem_without_goals_is_malformed():
    prob = load("robust_merge.json")
    with pytest.raises(MalformedProblem):
        compose(replace(prob, policy=replace(prob.policy, goal_types=())))
