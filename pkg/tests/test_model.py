from __future__ import annotations

import pytest

from wfcompose import COMPOSITION, ActivityKind, CycleError, InstanceGraph, ObjectId, assign_orders, predefined_ontology
from wfcompose.constraints import check_ordering
from wfcompose.model import (
    AlreadyConsumed,
    AlreadyProduced,
    AttributeSchemaMismatch,
    DuplicateName,
    Namespace,
    SecondComposition,
    UnknownOwner,
    arity_ok,
    find_cycle,
)

K = ActivityKind


@pytest.fixture
def graph():
    g = InstanceGraph(predefined_ontology())
    g.add_workflow("W")
    g.add_workflow(COMPOSITION, is_composition=True)
    return g


def test_serials_are_dense_per_namespace(graph):
    w = graph.lookup(Namespace.WORKFLOW, "W")
    a = graph.add_activity(K.ACTION, w)
    b = graph.add_activity(K.ACTION, w)
    m = graph.add_message()
    assert (a.serial, b.serial, m.serial) == (0, 1, 0)
    assert graph.activities[a].name == "_a0" and graph.messages[m].name == "_m0"
    assert str(a) == "activity#0"
    assert a < b < m


def test_object_ids_are_values():
    assert ObjectId(Namespace.MESSAGE, 2) == ObjectId(Namespace.MESSAGE, 2)
    assert ObjectId(Namespace.MESSAGE, 2) != ObjectId(Namespace.ACTIVITY, 2)
    assert len({ObjectId(Namespace.ACTIVITY, 1), ObjectId(Namespace.ACTIVITY, 1)}) == 1
    with pytest.raises(AttributeError):
        ObjectId(Namespace.ACTIVITY, 1).serial = 3


def test_construction_errors(graph):
    w = graph.lookup(Namespace.WORKFLOW, "W")
    with pytest.raises(SecondComposition):
        graph.add_workflow("Other", is_composition=True)
    with pytest.raises(DuplicateName):
        graph.add_workflow("W")
    with pytest.raises(UnknownOwner):
        graph.add_activity(K.ACTION, ObjectId(Namespace.WORKFLOW, 9))
    with pytest.raises(AttributeSchemaMismatch):
        graph.add_message("ShipperOffer", attributes={"price": 1})
    with pytest.raises(AttributeSchemaMismatch):
        graph.add_message("ShipperOffer", attributes={"colour": "red"}, partial=True)
    a, b = graph.add_activity(K.ACTION, w), graph.add_activity(K.ACTION, w)
    m = graph.add_message()
    graph.connect_output(a, m)
    graph.connect_input(b, m)
    with pytest.raises(AlreadyProduced):
        graph.connect_output(b, m)
    with pytest.raises(AlreadyConsumed):
        graph.connect_input(a, m)
    assert graph.outputs_of(a) == [m] and graph.inputs_of(b) == [m]


def test_split_is_an_alias_for_fork():
    assert ActivityKind.parse("Split") is K.FORK
    assert ActivityKind.parse("Fork") is K.FORK
    with pytest.raises(ValueError):
        ActivityKind.parse("Spoon")


@pytest.mark.parametrize("kind, n_in, n_out, ok", [
    (K.INITIAL, 0, 1, True), (K.INITIAL, 1, 1, False),
    (K.FINAL, 2, 0, True), (K.FINAL, 1, 1, False),
    (K.FORK, 1, 1, True), (K.FORK, 2, 1, False), (K.FORK, 1, 0, False),
    (K.JOIN, 2, 1, True), (K.JOIN, 1, 1, False), (K.JOIN, 2, 2, False),
    (K.DECISION, 1, 2, True), (K.DECISION, 1, 1, False),
    (K.MERGE, 3, 1, True), (K.MERGE, 1, 1, False),
    (K.EXTERNAL_SIGNAL, 0, 2, True), (K.EXTERNAL_SIGNAL, 1, 1, False),
    (K.ACTION, 4, 0, True), (K.TRANSFORMATION, 1, 1, True),
])
def test_arity_table(kind, n_in, n_out, ok):
    assert arity_ok(kind, n_in, n_out) is ok


def _chain(graph, n):
    w = graph.lookup(Namespace.WORKFLOW, "W")
    acts = [graph.add_activity(K.ACTION, w) for _ in range(n)]
    msgs = []
    for p, c in zip(acts, acts[1:]):
        m = graph.add_message()
        graph.connect_output(p, m)
        graph.connect_input(c, m)
        msgs.append(m)
    return acts, msgs


def test_orders_are_longest_paths(graph):
    acts, msgs = _chain(graph, 4)
    shortcut = graph.add_message()
    graph.connect_output(acts[0], shortcut)
    graph.connect_input(acts[3], shortcut)
    orders = assign_orders(graph)
    assert [orders[m] for m in msgs] == [0, 1, 2]
    assert orders[shortcut] == 0
    assert check_ordering(graph) == []


def test_cycle_is_reported(graph):
    acts, msgs = _chain(graph, 3)
    back = graph.add_message()
    graph.connect_output(acts[2], back)
    graph.connect_input(acts[0], back)
    assert set(find_cycle(graph)) <= set(msgs) | {back}
    with pytest.raises(CycleError) as exc:
        assign_orders(graph)
    assert back in exc.value.cycle


def test_copy_is_independent(graph):
    acts, msgs = _chain(graph, 2)
    h = graph.copy()
    assert h == graph
    h.messages[msgs[0]].active = True
    assert h != graph and graph.messages[msgs[0]].active is None
