from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import pytest

from wfcompose import ActivityKind, check_all, compose
from wfcompose.io import (
    ParseError,
    SemanticError,
    emit_document,
    emit_problem,
    emit_solution,
    parse_document,
    parse_instance,
    parse_problem,
)
from wfcompose.model import InstanceGraph, Namespace
from wfcompose.ontology import predefined_ontology

K = ActivityKind
DATA = Path(__file__).resolve().parents[1] / "src" / "wfcompose" / "data"
FIXTURES = ("producer_shipper.json", "robust_merge.json", "unsat.json")


def text(name):
    return (DATA / name).read_text()


@lru_cache(maxsize=None)
def merge_solution():
    return compose(parse_problem(text("robust_merge.json")))


def doc(**sections):
    base = {"workflows": ["W"], "activities": [], "messages": [], "goals": ["UserAcknowledgement"]}
    base.update(sections)
    return json.dumps(base, indent=1)


def test_fixture_contents():
    p = parse_problem(text("producer_shipper.json"))
    assert [w.name for w in p.fragments.workflows.values() if not w.is_composition] == \
        ["ProducerWorkflow", "ShipperWorkflow"]
    assert [s.name for s in p.catalog] == ["extractSize"]
    assert p.policy.goal_types == ("ProducerOrderConfirmation", "ShipperOrderConfirmation")
    assert p.policy.max_price == 500
    assert "Size" in p.ontology and p.ontology.is_subtype("ShipperOffer", "Offer")


def test_split_alias_parses_as_fork():
    d = parse_document(doc(activities=[{"name": "s", "kind": "Split", "owner": "W"}]))
    assert [a.kind for a in d.graph.activities.values()] == [K.FORK]


@pytest.mark.parametrize("sections, needle", [
    ({"messages": [{"name": "m", "type": "Nope"}]}, "unknown type Nope"),
    ({"workflows": ["Composition"]}, "reserved"),
    ({"activities": [{"name": "a", "kind": "Action", "owner": "Composition"}]}, "unknown owner"),
    ({"activities": [{"name": "a", "kind": "Spoon", "owner": "W"}]}, "unknown activity kind"),
    ({"activities": [{"name": "_a0", "kind": "Action", "owner": "W"}]}, "underscore"),
    ({"messages": [{"name": "m", "producer": "ghost"}]}, "unknown producer"),
    ({"bounds": {"solutionLimit": 0}}, "solution_limit"),
])
def test_semantic_errors(sections, needle):
    with pytest.raises(SemanticError) as exc:
        parse_document(doc(**sections))
    assert needle in str(exc.value)


def test_unknown_key_reports_its_line():
    src = "\n".join([
        "{",
        '  "workflows": ["W"],',
        '  "activities": [',
        '    {"name": "a", "kind": "Action", "owner": "W"},',
        '    {"name": "b", "kind": "Action", "owner": "W", "colour": "red"}',
        "  ],",
        '  "goals": ["UserAcknowledgement"]',
        "}",
    ])
    with pytest.raises(ParseError) as exc:
        parse_document(src)
    assert exc.value.line == 5 and "colour" in exc.value.detail


def test_instance_only_keys_are_rejected_in_problems():
    with pytest.raises(ParseError):
        parse_document(doc(messages=[{"name": "m", "order": 0}]))
    assert parse_document(doc(messages=[{"name": "m", "order": 0}]), instance=True)


def test_json_syntax_error_has_a_line():
    with pytest.raises(ParseError) as exc:
        parse_document('{\n  "workflows": ["W"],\n  "goals": [\n}')
    assert exc.value.line == 4


@pytest.mark.parametrize("name", FIXTURES)
def test_problem_round_trip(name):
    p = parse_problem(text(name))
    again = parse_problem(emit_problem(p))
    assert again.fragments == p.fragments
    assert (again.catalog, again.policy, again.bounds) == (p.catalog, p.policy, p.bounds)
    assert emit_problem(again) == emit_problem(p)


def test_solution_round_trip_is_exact():
    sol = merge_solution()
    out = emit_solution(sol)
    g = parse_instance(out)
    assert g == sol.graph
    assert emit_document(g, sol.problem.catalog, sol.problem.policy, sol.problem.bounds,
                         sol.stats.as_dict()) == out
    assert check_all(g, g.ontology, sol.problem.policy, sol.problem.catalog) == []


def test_arrays_are_one_object_per_line():
    out = emit_solution(merge_solution())
    for line in out.splitlines():
        if line.startswith("    {"):
            assert json.loads(line.rstrip(","))
    assert list(json.loads(out)) == ["ontology", "workflows", "activities", "messages", "catalog",
                                     "userInputs", "goals", "policy", "bounds", "stats"]


def test_empty_graph_emits_a_minimal_document():
    g = InstanceGraph(predefined_ontology())
    g.add_workflow("Composition", is_composition=True)
    out = emit_document(g)
    d = json.loads(out)
    assert d["ontology"] == [] and d["activities"] == [] and d["workflows"] == []
    assert parse_instance(out) == g


def test_flipping_a_flag_is_caught_on_validation():
    sol = merge_solution()
    d = json.loads(emit_solution(sol))
    target = next(m for m in d["messages"] if m.get("active") is True and m.get("producer") and m.get("consumer"))
    target["active"] = False
    g = parse_instance(json.dumps(d))
    vs = check_all(g, g.ontology, sol.problem.policy, sol.problem.catalog)
    assert vs
    m = g.lookup(Namespace.MESSAGE, target["name"])
    assert any(m in v.subjects or g.messages[m].consumer in v.subjects or g.messages[m].producer in v.subjects
               for v in vs)
