"""Instance graphs of the workflow metamodel.

An :class:`InstanceGraph` holds workflows, activity nodes and messages.
Each message has at most one producer and at most one consumer activity;
the per-activity ``inputs_of``/``outputs_of`` views are kept as indexes
and are always the exact inverse of those two fields.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .ontology import Ontology, UnknownType

COMPOSITION = "Composition"
OFFER_ACCEPTANCE = "OfferAcceptance"


class ModelError(Exception):
    pass


class DuplicateName(ModelError):
    pass


class SecondComposition(ModelError):
    pass


class UnknownOwner(ModelError):
    pass


class UnknownId(ModelError):
    pass


class AlreadyProduced(ModelError):
    pass


class AlreadyConsumed(ModelError):
    pass


class AttributeSchemaMismatch(ModelError):
    pass


class CycleError(ModelError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("message cycle: " + " -> ".join(str(m) for m in self.cycle))


class Namespace(enum.Enum):
    WORKFLOW = "workflow"
    ACTIVITY = "activity"
    MESSAGE = "message"


_NS_RANK = {Namespace.WORKFLOW: 0, Namespace.ACTIVITY: 1, Namespace.MESSAGE: 2}
_NS_BY_RANK = {v: k for k, v in _NS_RANK.items()}


class ObjectId(tuple):
    """Immutable (namespace, serial) pair; ordered by namespace, then serial.

    A tuple subclass so hashing and comparison stay in C: ids are the keys
    of every index and the search touches them constantly.
    """

    __slots__ = ()

    def __new__(cls, namespace: Namespace, serial: int):
        return tuple.__new__(cls, (_NS_RANK[namespace], serial))

    @property
    def namespace(self) -> Namespace:
        return _NS_BY_RANK[self[0]]

    @property
    def serial(self) -> int:
        return self[1]

    def __reduce__(self):
        return ObjectId, (self.namespace, self.serial)

    def __str__(self):
        return f"{self.namespace.value}#{self.serial}"

    __repr__ = __str__


class ActivityKind(enum.Enum):
    ACTION = "Action"
    INITIAL = "InitialNode"
    FINAL = "FinalNode"
    FORK = "Fork"
    JOIN = "Join"
    DECISION = "Decision"
    MERGE = "Merge"
    TRANSFORMATION = "Transformation"
    EXTERNAL_SIGNAL = "ExternalSignal"

    @classmethod
    def parse(cls, text: str) -> ActivityKind:
        if text == "Split":
            return cls.FORK
        return cls(text)


@dataclass
class WorkflowDef:
    id: ObjectId
    name: str
    is_composition: bool = False


@dataclass
class ActivityNode:
    id: ObjectId
    kind: ActivityKind
    owner: ObjectId
    name: str
    # None means "not decided yet"; only problem fragments carry None
    active: bool | None = None
    role: str | None = None
    added: bool = False


@dataclass
class Message:
    id: ObjectId
    name: str
    data_type: str | None = None
    active: bool | None = None
    order: int = 0
    producer: ObjectId | None = None
    consumer: ObjectId | None = None
    attributes: dict = field(default_factory=dict)
    added: bool = False


def check_attributes(ont: Ontology, data_type: str | None, attributes: Mapping, partial=False):
    """Raise :class:`AttributeSchemaMismatch` unless ``attributes`` fit the schema."""
    if data_type is None:
        if attributes:
            raise AttributeSchemaMismatch("untyped message cannot carry attributes")
        return
    schema = ont.attributes_of(data_type)
    extra = sorted(set(attributes) - set(schema))
    if extra:
        raise AttributeSchemaMismatch(f"{data_type} has no attribute(s) {', '.join(extra)}")
    if not partial:
        missing = sorted(set(schema) - set(attributes))
        if missing:
            raise AttributeSchemaMismatch(f"{data_type} requires attribute(s) {', '.join(missing)}")
    for k, v in attributes.items():
        if not schema[k].accepts(v):
            raise AttributeSchemaMismatch(f"{data_type}.{k} = {v!r} is not a {schema[k]}")


class InstanceGraph:
    """Workflows, activities and messages with their wiring.

    Serials are dense per namespace and follow creation order.
    """

    def __init__(self, ontology: Ontology):
        self.ontology = ontology
        self.workflows: dict[ObjectId, WorkflowDef] = {}
        self.activities: dict[ObjectId, ActivityNode] = {}
        self.messages: dict[ObjectId, Message] = {}
        self._inputs: dict[ObjectId, list[ObjectId]] = {}
        self._outputs: dict[ObjectId, list[ObjectId]] = {}
        self._names: dict[Namespace, dict[str, ObjectId]] = {ns: {} for ns in Namespace}

    # -- construction -----------------------------------------------------

    def _next(self, ns: Namespace) -> ObjectId:
        table = {Namespace.WORKFLOW: self.workflows, Namespace.ACTIVITY: self.activities,
                 Namespace.MESSAGE: self.messages}[ns]
        return ObjectId(ns, len(table))

    def _claim(self, ns: Namespace, name: str, oid: ObjectId):
        if name in self._names[ns]:
            raise DuplicateName(f"{ns.value} name {name!r} already used")
        self._names[ns][name] = oid

    def add_workflow(self, name: str, is_composition: bool = False) -> ObjectId:
        if is_composition and self.composition is not None:
            raise SecondComposition("graph already has a composition workflow")
        oid = self._next(Namespace.WORKFLOW)
        self._claim(Namespace.WORKFLOW, name, oid)
        self.workflows[oid] = WorkflowDef(oid, name, is_composition)
        return oid

    def add_activity(self, kind: ActivityKind, owner: ObjectId, active: bool | None = None,
                     role: str | None = None, name: str | None = None, added: bool = False) -> ObjectId:
        if owner not in self.workflows:
            raise UnknownOwner(f"no workflow {owner}")
        oid = self._next(Namespace.ACTIVITY)
        name = name if name is not None else f"_a{oid.serial}"
        self._claim(Namespace.ACTIVITY, name, oid)
        self.activities[oid] = ActivityNode(oid, kind, owner, name, active, role, added)
        self._inputs[oid] = []
        self._outputs[oid] = []
        return oid

    def add_message(self, data_type: str | None = None, active: bool | None = None,
                    attributes: Mapping | None = None, name: str | None = None,
                    added: bool = False, partial: bool = False) -> ObjectId:
        attributes = dict(attributes or {})
        if data_type is not None and data_type not in self.ontology:
            raise UnknownType(data_type)
        check_attributes(self.ontology, data_type, attributes, partial=partial)
        oid = self._next(Namespace.MESSAGE)
        name = name if name is not None else f"_m{oid.serial}"
        self._claim(Namespace.MESSAGE, name, oid)
        self.messages[oid] = Message(oid, name, data_type, active, 0, None, None, attributes, added)
        return oid

    def connect_output(self, activity: ObjectId, message: ObjectId):
        act, msg = self.activity(activity), self.message(message)
        if msg.producer is not None:
            raise AlreadyProduced(f"{msg.name} is already produced by {msg.producer}")
        msg.producer = act.id
        self._outputs[act.id].append(msg.id)

    def connect_input(self, activity: ObjectId, message: ObjectId):
        act, msg = self.activity(activity), self.message(message)
        if msg.consumer is not None:
            raise AlreadyConsumed(f"{msg.name} is already consumed by {msg.consumer}")
        msg.consumer = act.id
        self._inputs[act.id].append(msg.id)

    # -- queries ----------------------------------------------------------

    @property
    def composition(self) -> ObjectId | None:
        for w in self.workflows.values():
            if w.is_composition:
                return w.id
        return None

    def activity(self, oid: ObjectId) -> ActivityNode:
        try:
            return self.activities[oid]
        except KeyError:
            raise UnknownId(f"no activity {oid}") from None

    def message(self, oid: ObjectId) -> Message:
        try:
            return self.messages[oid]
        except KeyError:
            raise UnknownId(f"no message {oid}") from None

    def inputs_of(self, activity: ObjectId) -> list[ObjectId]:
        if activity not in self.activities:
            raise UnknownId(f"no activity {activity}")
        return sorted(self._inputs[activity])

    def outputs_of(self, activity: ObjectId) -> list[ObjectId]:
        if activity not in self.activities:
            raise UnknownId(f"no activity {activity}")
        return sorted(self._outputs[activity])

    def lookup(self, ns: Namespace, name: str) -> ObjectId | None:
        return self._names[ns].get(name)

    def name_of(self, oid: ObjectId) -> str:
        if oid.namespace is Namespace.WORKFLOW:
            return self.workflows[oid].name
        if oid.namespace is Namespace.ACTIVITY:
            return self.activities[oid].name
        return self.messages[oid].name

    def owner_of(self, activity: ObjectId | None) -> ObjectId | None:
        if activity is None or activity not in self.activities:
            return None
        return self.activities[activity].owner

    def is_composition_owned(self, activity: ObjectId) -> bool:
        return self.activities[activity].owner == self.composition

    def iter_objects(self) -> Iterator:
        yield from self.workflows.values()
        yield from self.activities.values()
        yield from self.messages.values()

    def copy(self) -> InstanceGraph:
        g = InstanceGraph.__new__(InstanceGraph)
        g.ontology = self.ontology
        g.workflows = {k: WorkflowDef(w.id, w.name, w.is_composition) for k, w in self.workflows.items()}
        g.activities = {k: ActivityNode(a.id, a.kind, a.owner, a.name, a.active, a.role, a.added)
                        for k, a in self.activities.items()}
        g.messages = {k: Message(m.id, m.name, m.data_type, m.active, m.order, m.producer,
                                 m.consumer, dict(m.attributes), m.added)
                      for k, m in self.messages.items()}
        g._inputs = {k: list(v) for k, v in self._inputs.items()}
        g._outputs = {k: list(v) for k, v in self._outputs.items()}
        g._names = {ns: dict(t) for ns, t in self._names.items()}
        return g

    def rebuild_indexes(self):
        """Recompute inverse views and name tables after direct field edits."""
        self._inputs = {a: [] for a in self.activities}
        self._outputs = {a: [] for a in self.activities}
        for m in self.messages.values():
            if m.producer in self._outputs:
                self._outputs[m.producer].append(m.id)
            if m.consumer in self._inputs:
                self._inputs[m.consumer].append(m.id)
        self._names = {ns: {} for ns in Namespace}
        for obj in self.iter_objects():
            self._names[obj.id.namespace].setdefault(obj.name, obj.id)

    def __eq__(self, other):
        if not isinstance(other, InstanceGraph):
            return NotImplemented
        return (self.ontology == other.ontology and self.workflows == other.workflows
                and self.activities == other.activities and self.messages == other.messages)

    def __repr__(self):
        return (f"InstanceGraph({len(self.workflows)} workflows, {len(self.activities)} activities, "
                f"{len(self.messages)} messages)")


# kind -> (min inputs, max inputs, min outputs, max outputs); None = unbounded
ARITY = {
    ActivityKind.INITIAL: (0, 0, 0, None),
    ActivityKind.FINAL: (0, None, 0, 0),
    ActivityKind.FORK: (1, 1, 1, None),
    ActivityKind.JOIN: (2, None, 1, 1),
    ActivityKind.DECISION: (1, 1, 2, None),
    ActivityKind.MERGE: (2, None, 1, 1),
    ActivityKind.EXTERNAL_SIGNAL: (0, 0, 0, None),
    ActivityKind.ACTION: (0, None, 0, None),
    ActivityKind.TRANSFORMATION: (0, None, 0, None),
}


def arity_ok(kind: ActivityKind, n_in: int, n_out: int) -> bool:
    lo_i, hi_i, lo_o, hi_o = ARITY[kind]
    return (lo_i <= n_in and (hi_i is None or n_in <= hi_i)
            and lo_o <= n_out and (hi_o is None or n_out <= hi_o))


def _bound(lo, hi):
    if hi is None:
        return f">={lo}"
    return str(lo) if lo == hi else f"{lo}..{hi}"


def arity_check(graph: InstanceGraph, activity: ObjectId) -> list:
    from .constraints import ConstraintId, Violation

    act = graph.activity(activity)
    n_in, n_out = len(graph.inputs_of(activity)), len(graph.outputs_of(activity))
    if arity_ok(act.kind, n_in, n_out):
        return []
    lo_i, hi_i, lo_o, hi_o = ARITY[act.kind]
    return [Violation(ConstraintId.S2, (activity,),
                      f"{act.kind.value} {act.name} has {n_in} inputs/{n_out} outputs, "
                      f"needs {_bound(lo_i, hi_i)} inputs/{_bound(lo_o, hi_o)} outputs")]


def message_successors(graph: InstanceGraph) -> dict[ObjectId, list[ObjectId]]:
    """Message digraph: m -> m' when m enters and m' leaves the same activity."""
    succ: dict[ObjectId, list[ObjectId]] = {m: [] for m in graph.messages}
    for a in graph.activities:
        outs = graph._outputs[a]
        if outs:
            for m in graph._inputs[a]:
                succ[m].extend(outs)
    return succ


def find_cycle(graph: InstanceGraph) -> list[ObjectId] | None:
    succ = message_successors(graph)
    colour = dict.fromkeys(succ, 0)
    for start in sorted(succ):
        if colour[start]:
            continue
        stack = [(start, iter(sorted(succ[start])))]
        path = [start]
        colour[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
                path.pop()
            elif colour[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif colour[nxt] == 0:
                colour[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(sorted(succ[nxt]))))
    return None


def longest_path_orders(graph: InstanceGraph) -> dict[ObjectId, int]:
    """Minimal strict ordering; raises :class:`CycleError` on a message cycle."""
    indeg = {m: 0 for m in graph.messages}
    succ = message_successors(graph)
    for outs in succ.values():
        for m2 in outs:
            indeg[m2] += 1
    order = {m: 0 for m in graph.messages}
    ready = sorted(m for m, d in indeg.items() if d == 0)
    done = 0
    while ready:
        m = ready.pop()
        done += 1
        for m2 in succ[m]:
            if order[m] + 1 > order[m2]:
                order[m2] = order[m] + 1
            indeg[m2] -= 1
            if indeg[m2] == 0:
                ready.append(m2)
    if done != len(indeg):
        raise CycleError(find_cycle(graph))
    return order


def assign_orders(graph: InstanceGraph) -> dict[ObjectId, int]:
    orders = longest_path_orders(graph)
    for m, o in orders.items():
        graph.messages[m].order = o
    return orders
