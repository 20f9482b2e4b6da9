"""Well-formedness rules over instance graphs.

Each ``check_*`` function is pure and returns a list of :class:`Violation`.
Rule identifiers:

* ``S1``-``S3`` structural integrity (references, arities, dangling active
  messages),
* ``C1``-``C12`` composition semantics (activation, boundary, ordering,
  offer acceptance, fork typing, external signals, price policy),
* ``D1``-``D3`` typing of merges, decisions and transformations,
* ``G1`` goal reachability.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import (
    OFFER_ACCEPTANCE,
    ActivityKind,
    AttributeSchemaMismatch,
    InstanceGraph,
    ObjectId,
    arity_check,
    check_attributes,
)
from .ontology import Ontology, OntologyError

K = ActivityKind


class ConstraintId(enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    C11 = "C11"
    C12 = "C12"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    G1 = "G1"

    @property
    def rank(self) -> int:
        return _RANK[self]


_RANK = {c: i for i, c in enumerate(ConstraintId)}


@dataclass(frozen=True)
class Violation:
    constraint: ConstraintId
    subjects: tuple[ObjectId, ...]
    detail: str = field(default="", compare=False)

    def sort_key(self):
        return (self.constraint.rank, tuple(self.subjects))

    def __str__(self):
        subjects = " ".join(str(s) for s in self.subjects)
        return f"{self.constraint.value} {subjects} : {self.detail}"


@dataclass(frozen=True)
class PolicyConfig:
    goal_types: tuple[str, ...] = ()
    user_input_types: frozenset[str] = frozenset()
    max_price: int | None = None
    robust: bool = False

    def __post_init__(self):
        object.__setattr__(self, "goal_types", tuple(self.goal_types))
        object.__setattr__(self, "user_input_types", frozenset(self.user_input_types))


@dataclass(frozen=True)
class TransformationSig:
    name: str
    input_types: tuple[str, ...]
    output_type: str

    def __post_init__(self):
        object.__setattr__(self, "input_types", tuple(self.input_types))
        if not self.input_types:
            raise ValueError(f"transformation {self.name} needs at least one input type")


def render(violations: Iterable[Violation]) -> str:
    return "".join(f"{v}\n" for v in violations)


def _on(flag) -> bool:
    return flag is True


def _sub(ont: Ontology, t: str | None, sup: str) -> bool:
    """``t ⊑ sup`` for a possibly untyped message; false if ``sup`` is undeclared."""
    if t is None or sup not in ont or t not in ont:
        return False
    return ont.is_subtype(t, sup)


# -- activation ---------------------------------------------------------------

ACTION_LIKE = (K.ACTION, K.TRANSFORMATION)


def check_activation(graph: InstanceGraph) -> list[Violation]:
    out = []
    msgs, acts = graph.messages, graph.activities
    for a in acts.values():
        if a.kind in ACTION_LIKE and _on(a.active):
            for m in graph.inputs_of(a.id):
                if not _on(msgs[m].active):
                    out.append(Violation(ConstraintId.C1, (a.id, m),
                                         f"active {a.name} has inactive input {msgs[m].name}"))
    for m in msgs.values():
        if not _on(m.active) or m.producer not in acts:
            continue
        p = acts[m.producer]
        ins = graph.inputs_of(p.id)
        if p.kind is K.JOIN or p.kind in (K.DECISION, K.FORK):
            rule = ConstraintId.C2 if p.kind is K.JOIN else ConstraintId.C3
            for i in ins:
                if not _on(msgs[i].active):
                    out.append(Violation(rule, (m.id, i),
                                         f"active {m.name} leaves {p.kind.value} {p.name} "
                                         f"whose input {msgs[i].name} is inactive"))
        elif p.kind is K.MERGE and not any(_on(msgs[i].active) for i in ins):
            out.append(Violation(ConstraintId.C4, (m.id, p.id),
                                 f"active {m.name} leaves merge {p.name} with no active input"))
    for a in acts.values():
        if a.kind is K.MERGE and _on(a.active):
            if not any(_on(msgs[i].active) for i in graph.inputs_of(a.id)):
                out.append(Violation(ConstraintId.C5, (a.id,), f"active merge {a.name} has no active input"))
    return out


# -- composition boundary -----------------------------------------------------

def check_boundary(graph: InstanceGraph) -> list[Violation]:
    comp = graph.composition
    out = []
    for m in graph.messages.values():
        po, co = graph.owner_of(m.producer), graph.owner_of(m.consumer)
        if po is None or co is None or po == co:
            continue
        if co != comp and po != comp:
            out.append(Violation(ConstraintId.C6, (m.id,),
                                 f"{m.name} enters {graph.name_of(co)} without coming from the composition"))
            out.append(Violation(ConstraintId.C7, (m.id,),
                                 f"{m.name} leaves {graph.name_of(po)} without entering the composition"))
    return out


# -- ordering -----------------------------------------------------------------

def check_ordering(graph: InstanceGraph) -> list[Violation]:
    out = []
    msgs = graph.messages
    for a in graph.activities.values():
        for i in graph.inputs_of(a.id):
            for o in graph.outputs_of(a.id):
                if msgs[i].order >= msgs[o].order:
                    out.append(Violation(ConstraintId.C8, (a.id, i, o),
                                         f"{a.name}: input {msgs[i].name} order {msgs[i].order} "
                                         f">= output {msgs[o].name} order {msgs[o].order}"))
    return out


# -- offer acceptance ---------------------------------------------------------

def _is_glue_fork(graph: InstanceGraph, a: ObjectId | None) -> bool:
    act = graph.activities.get(a)
    return act is not None and act.kind is K.FORK and act.owner == graph.composition


def origin_owner(graph: InstanceGraph, m: ObjectId) -> ObjectId | None:
    """Owner of the activity a message comes from, looking through composition forks."""
    seen = set()
    while True:
        p = graph.messages[m].producer
        if not _is_glue_fork(graph, p) or m in seen:
            return graph.owner_of(p)
        seen.add(m)
        ins = graph.inputs_of(p)
        if len(ins) != 1:
            return graph.owner_of(p)
        m = ins[0]


def destination_owners(graph: InstanceGraph, m: ObjectId) -> list[ObjectId | None]:
    """Owners of the activities a message ends up in, looking through composition forks."""
    out, stack, seen = [], [m], set()
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        c = graph.messages[x].consumer
        if _is_glue_fork(graph, c) and graph.outputs_of(c):
            stack.extend(graph.outputs_of(c))
        else:
            out.append(graph.owner_of(c))
    return out


def check_offer_acceptance(graph: InstanceGraph, ont: Ontology | None = None) -> list[Violation]:
    ont = ont or graph.ontology
    out = []
    comp = graph.composition
    msgs = graph.messages
    for a in graph.activities.values():
        if a.role != OFFER_ACCEPTANCE:
            continue

        def fail(detail):
            out.append(Violation(ConstraintId.C9, (a.id,), f"{a.name}: {detail}"))

        ins, outs = graph.inputs_of(a.id), graph.outputs_of(a.id)
        offers = [m for m in ins if _sub(ont, msgs[m].data_type, "Offer")]
        acks = [m for m in ins if _sub(ont, msgs[m].data_type, "UserAcknowledgement")]
        answers = [m for m in outs if _sub(ont, msgs[m].data_type, "OfferAnswer")]
        if len(ins) != 2 or len(offers) != 1 or len(acks) != 1:
            fail("needs exactly one Offer and one UserAcknowledgement input")
            continue
        if len(outs) != 1 or len(answers) != 1:
            fail("needs exactly one OfferAnswer output")
            continue
        src = origin_owner(graph, offers[0])
        dests = destination_owners(graph, answers[0])
        if src is None or src == comp:
            fail("offer does not originate in a partner workflow")
        elif any(d != src for d in dests):
            names = sorted({graph.name_of(d) if d is not None else "(nowhere)" for d in dests})
            fail(f"offer from {graph.name_of(src)} answered to {', '.join(names)}")
    return out


# -- typing -------------------------------------------------------------------

def check_fork_typing(graph: InstanceGraph) -> list[Violation]:
    out = []
    msgs = graph.messages
    for a in graph.activities.values():
        if a.kind is not K.FORK:
            continue
        ins = graph.inputs_of(a.id)
        if not ins:
            continue
        t = msgs[ins[0]].data_type
        for m in ins[1:] + graph.outputs_of(a.id):
            if msgs[m].data_type != t:
                out.append(Violation(ConstraintId.C10, (a.id, m),
                                     f"fork {a.name} carries {t} but {msgs[m].name} is {msgs[m].data_type}"))
    return out


def check_external_signals(graph: InstanceGraph, policy: PolicyConfig) -> list[Violation]:
    out = []
    for a in graph.activities.values():
        if a.kind is not K.EXTERNAL_SIGNAL:
            continue
        for m in graph.outputs_of(a.id):
            t = graph.messages[m].data_type
            if t not in policy.user_input_types:
                out.append(Violation(ConstraintId.C11, (a.id, m),
                                     f"signal {a.name} emits {t}, not a user input type"))
    return out


def check_policy(graph: InstanceGraph, ont: Ontology | None, policy: PolicyConfig) -> list[Violation]:
    ont = ont or graph.ontology
    if policy.max_price is None:
        return []
    out = []
    for m in graph.messages.values():
        if _sub(ont, m.data_type, "Offer"):
            price = m.attributes.get("price")
            if isinstance(price, int) and price > policy.max_price:
                out.append(Violation(ConstraintId.C12, (m.id,),
                                     f"{m.name} price {price} exceeds {policy.max_price}"))
    return out


def signature_matches(ont: Ontology, sig: TransformationSig, in_types: Sequence, out_types: Sequence) -> bool:
    if len(out_types) != 1 or out_types[0] != sig.output_type:
        return False
    if len(in_types) != len(sig.input_types):
        return False
    # bipartite match of actual inputs onto declared slots (tiny; brute force)
    from itertools import permutations
    slots = sig.input_types
    return any(all(_sub(ont, t, s) for t, s in zip(perm, slots)) for perm in permutations(in_types))


def check_structural(graph: InstanceGraph, ont: Ontology | None = None,
                     catalog: Iterable[TransformationSig] | None = None) -> list[Violation]:
    ont = ont or graph.ontology
    out = []
    msgs, acts = graph.messages, graph.activities
    # S1: references, multiplicity, typing integrity
    comps = [w.id for w in graph.workflows.values() if w.is_composition]
    for w in comps[1:]:
        out.append(Violation(ConstraintId.S1, (w,), "second composition workflow"))
    for a in acts.values():
        if a.owner not in graph.workflows:
            out.append(Violation(ConstraintId.S1, (a.id,), f"{a.name} has unknown owner {a.owner}"))
    for m in msgs.values():
        for end, oid in (("producer", m.producer), ("consumer", m.consumer)):
            if oid is not None and oid not in acts:
                out.append(Violation(ConstraintId.S1, (m.id,), f"{m.name} has unknown {end} {oid}"))
        if m.producer in acts and m.id not in graph._outputs.get(m.producer, ()):
            out.append(Violation(ConstraintId.S1, (m.id,), f"{m.name} missing from outputs of its producer"))
        if m.consumer in acts and m.id not in graph._inputs.get(m.consumer, ()):
            out.append(Violation(ConstraintId.S1, (m.id,), f"{m.name} missing from inputs of its consumer"))
        if m.data_type is not None and m.data_type not in ont:
            out.append(Violation(ConstraintId.S1, (m.id,), f"{m.name} has unknown type {m.data_type}"))
            continue
        try:
            check_attributes(ont, m.data_type, m.attributes)
        except (AttributeSchemaMismatch, OntologyError) as exc:
            out.append(Violation(ConstraintId.S1, (m.id,), f"{m.name}: {exc}"))
    for a, lst in list(graph._inputs.items()) + list(graph._outputs.items()):
        for m in lst:
            if m not in msgs:
                out.append(Violation(ConstraintId.S1, (a,), f"wired to unknown message {m}"))
    if any(v.constraint is ConstraintId.S1 and "unknown" in v.detail for v in out):
        return sorted(out, key=Violation.sort_key)

    # S2: arities
    for a in acts:
        out.extend(arity_check(graph, a))
    # S3: dangling active messages
    for m in msgs.values():
        if _on(m.active) and (m.producer is None or m.consumer is None):
            side = "producer" if m.producer is None else "consumer"
            out.append(Violation(ConstraintId.S3, (m.id,), f"active {m.name} has no {side}"))
    out.extend(check_design_typing(graph, ont, catalog))
    return out


def check_design_typing(graph: InstanceGraph, ont: Ontology | None = None,
                        catalog: Iterable[TransformationSig] | None = None) -> list[Violation]:
    ont = ont or graph.ontology
    out = []
    msgs = graph.messages
    for a in graph.activities.values():
        if a.kind is K.MERGE:
            outs = graph.outputs_of(a.id)
            if len(outs) != 1:
                continue
            ot = msgs[outs[0]].data_type
            for i in graph.inputs_of(a.id):
                if not _on(msgs[i].active):
                    continue
                it = msgs[i].data_type
                ok = (it is None) if ot is None else _sub(ont, it, ot)
                if not ok:
                    out.append(Violation(ConstraintId.D1, (a.id, i),
                                         f"merge {a.name} output {ot} does not cover input {it}"))
        elif a.kind is K.DECISION:
            ins = graph.inputs_of(a.id)
            if len(ins) != 1:
                continue
            it = msgs[ins[0]].data_type
            for o in graph.outputs_of(a.id):
                if msgs[o].data_type != it:
                    out.append(Violation(ConstraintId.D2, (a.id, o),
                                         f"decision {a.name} input {it} but output {msgs[o].data_type}"))
    if catalog is not None:
        sigs = {s.name: s for s in catalog}
        for a in graph.activities.values():
            if a.kind is not K.TRANSFORMATION:
                continue
            sig = sigs.get(a.role)
            if sig is None:
                out.append(Violation(ConstraintId.D3, (a.id,), f"{a.name}: no catalog signature {a.role!r}"))
                continue
            in_t = [msgs[m].data_type for m in graph.inputs_of(a.id)]
            out_t = [msgs[m].data_type for m in graph.outputs_of(a.id)]
            if not signature_matches(ont, sig, in_t, out_t):
                out.append(Violation(ConstraintId.D3, (a.id,),
                                     f"{a.name}: {in_t} -> {out_t} does not fit {sig.name}"))
    return out


# -- goal ---------------------------------------------------------------------

def goal_messages(graph: InstanceGraph, ont: Ontology, goal: str) -> list[ObjectId]:
    """Messages entering a composition final node whose type is ⊑ ``goal``."""
    comp = graph.composition
    found = []
    for a in graph.activities.values():
        if a.kind is K.FINAL and a.owner == comp:
            found.extend(m for m in graph.inputs_of(a.id) if _sub(ont, graph.messages[m].data_type, goal))
    return sorted(found)


def unreached_goals(graph: InstanceGraph, ont: Ontology | None, policy: PolicyConfig) -> list[str]:
    ont = ont or graph.ontology
    return [g for g in policy.goal_types
            if not any(_on(graph.messages[m].active) for m in goal_messages(graph, ont, g))]


def check_goal(graph: InstanceGraph, ont: Ontology | None, policy: PolicyConfig) -> bool:
    if unreached_goals(graph, ont, policy):
        return False
    if policy.robust:
        return all(_on(x.active) for x in list(graph.activities.values()) + list(graph.messages.values()))
    return True


def _goal_violation(graph, ont, policy) -> list[Violation]:
    if check_goal(graph, ont, policy):
        return []
    comp = graph.composition
    subjects = (comp,) if comp is not None else ()
    missing = unreached_goals(graph, ont, policy)
    detail = ("unreached goal(s) " + ", ".join(missing)) if missing else "robust mode: inactive elements"
    return [Violation(ConstraintId.G1, subjects, detail)]


def check_activation_dependent(graph: InstanceGraph, ont: Ontology | None, policy: PolicyConfig) -> list[Violation]:
    """The rules whose outcome depends on ``active`` flags (S3, C1-C5, D1, G1)."""
    ont = ont or graph.ontology
    out = [Violation(ConstraintId.S3, (m.id,), f"active {m.name} is dangling")
           for m in graph.messages.values()
           if _on(m.active) and (m.producer is None or m.consumer is None)]
    out += check_activation(graph)
    out += [v for v in check_design_typing(graph, ont) if v.constraint is ConstraintId.D1]
    out += _goal_violation(graph, ont, policy)
    return out


def check_all(graph: InstanceGraph, ont: Ontology | None = None, policy: PolicyConfig | None = None,
              catalog: Iterable[TransformationSig] | None = None) -> list[Violation]:
    ont = ont or graph.ontology
    policy = policy or PolicyConfig()
    out = check_structural(graph, ont, catalog)
    if not any(v.constraint is ConstraintId.S1 for v in out):
        out += check_activation(graph)
        out += check_boundary(graph)
        out += check_ordering(graph)
        out += check_offer_acceptance(graph, ont)
        out += check_fork_typing(graph)
        out += check_external_signals(graph, policy)
        out += check_policy(graph, ont, policy)
    out += _goal_violation(graph, ont, policy)
    return sorted(out, key=Violation.sort_key)


# -- invariants -----------------------------------------------------------------

def unsupported_messages(graph: InstanceGraph) -> list[ObjectId]:
    """Active messages with no backward chain of active messages to a source.

    A source is an activity without inputs (initial nodes, external
    signals).  In a graph with consistent activation every active message
    has such a chain; at merges any one active input suffices.
    """
    msgs, memo = graph.messages, {}

    def supported(m, stack=frozenset()):
        if m in memo:
            return memo[m]
        if m in stack:
            return False
        p = msgs[m].producer
        if p is None or p not in graph.activities:
            ok = False
        else:
            ins = graph.inputs_of(p)
            ok = not ins or any(_on(msgs[i].active) and supported(i, stack | {m}) for i in ins)
        memo[m] = ok
        return ok

    return [m for m in sorted(msgs) if _on(msgs[m].active) and not supported(m)]
