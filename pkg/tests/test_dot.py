from __future__ import annotations

from pathlib import Path

from catalog import Builder
from wfcompose import ActivityKind, compose
from wfcompose.dot import emit_dot
from wfcompose.io import parse_problem

K = ActivityKind
DATA = Path(__file__).resolve().parents[1] / "src" / "wfcompose" / "data"


def _edges(dot):
    return [line for line in dot.splitlines() if "->" in line]


def test_chain_has_three_nodes_and_two_edges():
    g = Builder().chain().done().graph
    dot = emit_dot(g)
    assert dot.startswith('digraph "workflow" {') and dot.endswith("}\n")
    assert sum(1 for line in dot.splitlines() if line.strip().startswith("a") and "->" not in line) == 3
    assert len(_edges(dot)) == 2
    assert 'label="t0:-:0"' in dot and 'label="t1:-:1"' in dot


def test_open_pins_get_stubs():
    b = Builder().chain().msg("loose", "act", None, type="UserAcknowledgement", active=False)
    dot = emit_dot(b.done().graph)
    serial = b.m["loose"].serial
    assert f"m{serial}_dst [shape=none" in dot
    assert f'-> m{serial}_dst [label="loose:UserAcknowledgement:1", style=dashed]' in dot


def test_inactive_activity_is_dashed():
    b = Builder().chain().act("spare", K.ACTION, active=False)
    line = next(x for x in emit_dot(b.done().graph).splitlines() if '"spare"' in x)
    assert "style=dashed" in line


def test_solution_rendering_is_stable_and_marks_additions():
    sol = compose(parse_problem((DATA / "robust_merge.json").read_text()))
    dot = emit_dot(sol.graph)
    assert dot == emit_dot(sol.graph.copy())
    assert 'label="Composition"' in dot and "color=blue" in dot
    assert len(_edges(dot)) == len(sol.graph.messages)


def test_transformation_is_an_ellipse_in_the_scenario():
    sol = compose(parse_problem((DATA / "producer_shipper.json").read_text()))
    line = next(x for x in emit_dot(sol.graph).splitlines() if "extractSize" in x and "->" not in x)
    assert "shape=ellipse" in line and "color=blue" in line
