"""The bounded solution space shared by the search engine and the oracle.

A solution extends the problem fragments with composition-owned
activities and messages.  Everything that is not a structural choice is
derived here, so two solutions with the same wiring are the same solution:

* message orders are the longest-path assignment,
* missing attribute values flow from the producer's inputs (first input
  carrying the attribute) or fall back to the kind default,
* message activation is the smallest valid set (ties broken by the sorted
  serials), activity flags follow their messages: an activity is active iff
  one of its outputs is, or, for sinks, one of its inputs is.

A structure is admissible only if every added object, and every fragment
pin the composition attached to, ends up active.
"""

from __future__ import annotations

from dataclasses import replace

from .constraints import (
    ConstraintId,
    check_activation_dependent,
    check_all,
    check_boundary,
    check_design_typing,
    check_external_signals,
    check_fork_typing,
    check_offer_acceptance,
)
from .model import (
    OFFER_ACCEPTANCE,
    ActivityKind,
    CycleError,
    InstanceGraph,
    ObjectId,
    arity_check,
    assign_orders,
    find_cycle,
)
from .problem import Problem

K = ActivityKind

OA_TYPES = ("Offer", "UserAcknowledgement", "OfferAnswer")


def offer_acceptance_available(problem: Problem) -> bool:
    return all(t in problem.ontology for t in OA_TYPES)


def addable_variants(problem: Problem) -> list[tuple[ActivityKind, str | None]]:
    """Kinds (with role tag) the composition may introduce, in generator order."""
    out = [(K.FINAL, None), (K.FORK, None), (K.JOIN, None), (K.EXTERNAL_SIGNAL, None)]
    if offer_acceptance_available(problem):
        out.append((K.ACTION, OFFER_ACCEPTANCE))
    out += [(K.TRANSFORMATION, s.name) for s in problem.catalog]
    return out


def candidate_types(problem: Problem) -> list[str | None]:
    """Datatypes an added message may carry; ``None`` is an untyped token."""
    ont = problem.ontology
    out = ont.concrete_types()
    out += sorted(t for t in problem.policy.user_input_types if t not in out)
    return out + [None]


def transformation_depth(graph: InstanceGraph) -> int:
    """Longest chain of composition transformations feeding one another."""
    comp = graph.composition
    acts = [a for a in graph.activities.values() if a.owner == comp]
    memo: dict[ObjectId, int] = {}

    def depth(a, stack=()):
        if a in memo:
            return memo[a]
        if a in stack:
            return 0
        best = 0
        for m in graph._inputs[a]:
            p = graph.messages[m].producer
            if p is not None and graph.activities[p].owner == comp:
                best = max(best, depth(p, stack + (a,)))
        here = best + (1 if graph.activities[a].kind is K.TRANSFORMATION else 0)
        memo[a] = here
        return here

    return max((depth(a.id) for a in acts), default=0)


def admissible(problem: Problem, graph: InstanceGraph) -> bool:
    b = problem.bounds
    added_acts = [a for a in graph.activities.values() if a.added]
    added_msgs = [m for m in graph.messages.values() if m.added]
    if len(added_acts) > b.max_added_activities or len(added_msgs) > b.max_added_messages:
        return False
    variants = set(addable_variants(problem))
    comp = graph.composition
    for a in added_acts:
        if a.owner != comp or (a.kind, a.role) not in variants:
            return False
    types = set(candidate_types(problem))
    for m in added_msgs:
        if m.data_type not in types:
            return False
        for end in (m.producer, m.consumer):
            if end is None or not graph.activities[end].added:
                return False
        if graph.activities[m.producer].kind is K.JOIN and m.data_type is not None:
            return False
    return transformation_depth(graph) <= b.max_transformation_depth


def wiring_ok(problem: Problem, graph: InstanceGraph) -> bool:
    """Checks that depend on neither labelling nor activation.

    A structure failing these can never become a solution, so callers run
    them before the costlier canonicalisation and activation steps.
    """
    if not admissible(problem, graph) or find_cycle(graph) is not None:
        return False
    if any(arity_check(graph, a) for a in graph.activities):
        return False
    ont, policy = problem.ontology, problem.policy
    if check_boundary(graph) or check_offer_acceptance(graph, ont) or check_fork_typing(graph):
        return False
    if check_external_signals(graph, policy):
        return False
    return not [v for v in check_design_typing(graph, ont, problem.catalog) if v.constraint is not ConstraintId.D1]


def derive_attributes(graph: InstanceGraph):
    """Fill unset attributes; requires orders to be assigned."""
    ont = graph.ontology
    for m in sorted(graph.messages.values(), key=lambda m: (m.order, m.id.serial)):
        if m.data_type is None:
            continue
        schema = ont.attributes_of(m.data_type)
        missing = [k for k in schema if k not in m.attributes]
        if not missing:
            continue
        sources = []
        if m.producer is not None:
            sources = [graph.messages[i] for i in graph.inputs_of(m.producer)]
        for k in missing:
            for src in sources:
                if k in src.attributes and schema[k].accepts(src.attributes[k]):
                    m.attributes[k] = src.attributes[k]
                    break
            else:
                m.attributes[k] = schema[k].default()
        m.attributes = dict(sorted(m.attributes.items()))


def prepare(problem: Problem, graph: InstanceGraph) -> bool:
    """Admissibility, orders and attribute flow.  False if the structure is out."""
    if not admissible(problem, graph):
        return False
    try:
        assign_orders(graph)
    except CycleError:
        return False
    derive_attributes(graph)
    return True


def derived_activity_flag(graph: InstanceGraph, a: ObjectId) -> bool:
    outs = graph._outputs[a]
    if outs:
        return any(graph.messages[m].active for m in outs)
    return any(graph.messages[m].active for m in graph._inputs[a])


def apply_activation(problem: Problem, graph: InstanceGraph, active: set[ObjectId] | None):
    """Set flags from a message set; ``None`` means robust (everything on)."""
    if active is None:
        for x in list(graph.messages.values()) + list(graph.activities.values()):
            x.active = True
        return
    for m in graph.messages.values():
        m.active = m.id in active
    for a in graph.activities.values():
        a.active = derived_activity_flag(graph, a.id)


def fixed_flags_ok(problem: Problem, graph: InstanceGraph) -> bool:
    frag = problem.fragments
    for oid, m in frag.messages.items():
        if m.active is not None and graph.messages[oid].active != m.active:
            return False
    for oid, a in frag.activities.items():
        if a.active is not None and graph.activities[oid].active != a.active:
            return False
    return True


def activation_valid(problem: Problem, graph: InstanceGraph) -> bool:
    if not fixed_flags_ok(problem, graph):
        return False
    return not check_activation_dependent(graph, problem.ontology, problem.policy)


def attached_pins(problem: Problem, graph: InstanceGraph) -> list[ObjectId]:
    """Fragment messages whose missing end the composition filled."""
    out = []
    for oid, m in problem.fragments.messages.items():
        g = graph.messages[oid]
        if g.producer != m.producer or g.consumer != m.consumer:
            out.append(oid)
    return out


def participates(problem: Problem, graph: InstanceGraph) -> bool:
    if any(not x.active for x in graph.activities.values() if x.added):
        return False
    if any(not x.active for x in graph.messages.values() if x.added):
        return False
    return all(graph.messages[m].active for m in attached_pins(problem, graph))


def robust_support(problem: Problem) -> Problem:
    """The non-robust twin of a robust problem with every fragment message on.

    A robust solution must not carry glue that this twin's minimal activation
    leaves unused; otherwise any redundant extra wiring would qualify.
    """
    cached = problem.__dict__.get("_support")
    if cached is None:
        frag = problem.fragments.copy()
        for m in frag.messages.values():
            m.active = True
        policy = replace(problem.policy, robust=False)
        cached = replace(problem, fragments=frag, policy=policy)
        problem.__dict__["_support"] = cached
    return cached


def finalize(problem: Problem, graph: InstanceGraph, active: set[ObjectId] | None) -> bool:
    """Apply an activation to a prepared graph; True iff it is a full solution."""
    apply_activation(problem, graph, active)
    if not fixed_flags_ok(problem, graph) or not participates(problem, graph):
        return False
    return not check_all(graph, problem.ontology, problem.policy, problem.catalog)
