"""Bounded configuration search.

The engine grows the fragments backwards from what must hold: goals need an
active message entering a composition final node, and every message the
search commits to as active needs a producer and a consumer.  Committing a
message pulls in the inputs its producer depends on (the activation rules),
so the set of open requirements is always derived from the committed set.

Requirements are expanded fail-first (fewest alternatives, then kind, then
subject serial).  New objects are only created when a requirement targets
them, which is the usual least-index symmetry break: there is never a choice
between two fresh objects.  Complete structures are canonically relabelled,
their derived values (orders, attributes, activation) computed, and the
result re-validated with :func:`check_all` before it is returned.
"""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field
from typing import Iterator

from . import space
from .canonical import canonical_order, relabel
from .constraints import check_design_typing, destination_owners, origin_owner
from .model import OFFER_ACCEPTANCE, ActivityKind, InstanceGraph, ObjectId, find_cycle
from .problem import Problem, SearchStats, Solution

K = ActivityKind


class Unsatisfiable(Exception):
    """No solution exists within the bounds."""

    def __init__(self, stats: SearchStats):
        super().__init__("unsatisfiable within bounds")
        self.stats = stats


# -- activation closure ---------------------------------------------------------

# producers whose active outputs require every input to be active
ALL_INPUTS = (K.ACTION, K.TRANSFORMATION, K.JOIN, K.FORK, K.DECISION)


def close(graph: InstanceGraph, active: set[ObjectId]) -> set[ObjectId]:
    """Add to ``active`` everything the activation rules force."""
    todo = list(active)
    while todo:
        m = todo.pop()
        msg = graph.messages[m]
        forced = []
        if msg.producer is not None and graph.activities[msg.producer].kind in ALL_INPUTS:
            forced += graph._inputs[msg.producer]
        c = msg.consumer
        if c is not None and graph.activities[c].kind in (K.ACTION, K.TRANSFORMATION) \
                and not graph._outputs[c]:
            forced += graph._inputs[c]
        for x in forced:
            if x not in active:
                active.add(x)
                todo.append(x)
    return active


def open_merges(graph: InstanceGraph, active: set[ObjectId]) -> list[ObjectId]:
    out = []
    for a in graph.activities.values():
        if a.kind is K.MERGE and any(o in active for o in graph._outputs[a.id]):
            if not any(i in active for i in graph._inputs[a.id]):
                out.append(a.id)
    return sorted(out)


def _d1_ok(graph: InstanceGraph, merge: ObjectId, m: ObjectId) -> bool:
    outs = graph._outputs[merge]
    if len(outs) != 1:
        return True
    ot, it = graph.messages[outs[0]].data_type, graph.messages[m].data_type
    if ot is None:
        return it is None
    return it is not None and graph.ontology.is_subtype(it, ot)


def closure_activation(problem: Problem, graph: InstanceGraph) -> set[ObjectId] | None:
    """Smallest valid active-message set, ties broken by sorted serials.

    Every minimal valid set is a closure of one goal message per goal plus
    the fixed seeds, with one input picked at each merge; enumerate those
    closures and keep the best valid one.
    """
    from .constraints import goal_messages

    ont = problem.ontology
    frag = problem.fragments
    fixed_on = {m for m, x in frag.messages.items() if x.active is True}
    fixed_off = {m for m, x in frag.messages.items() if x.active is False}
    off_acts = {a for a, x in frag.activities.items() if x.active is False}
    on_acts = sorted(a for a, x in frag.activities.items() if x.active is True)

    choice_points = []
    for g in problem.policy.goal_types:
        cands = goal_messages(graph, ont, g)
        if not cands:
            return None
        choice_points.append(cands)
    for a in on_acts:
        pins = graph._outputs[a] or graph._inputs[a]
        if not pins:
            return None
        choice_points.append(sorted(pins))

    best: list = [None]

    def key(s):
        return (len(s), tuple(sorted(x.serial for x in s)))

    def violates_fixed(s):
        if s & fixed_off:
            return True
        for a in off_acts:
            outs = graph._outputs[a]
            if any(m in s for m in (outs or graph._inputs[a])):
                return True
        return False

    def expand(s, points):
        if best[0] is not None and len(s) > len(best[0]):
            return
        if violates_fixed(s):
            return
        if points:
            head, rest = points[0], points[1:]
            if any(x in s for x in head):
                expand(s, rest)
                return
            for x in head:
                expand(close(graph, s | {x}), rest)
            return
        merges = open_merges(graph, s)
        if merges:
            mg = merges[0]
            for x in sorted(graph._inputs[mg]):
                if _d1_ok(graph, mg, x):
                    expand(close(graph, s | {x}), [])
            return
        space.apply_activation(problem, graph, s)
        if space.activation_valid(problem, graph):
            if best[0] is None or key(s) < key(best[0]):
                best[0] = set(s)

    expand(close(graph, set(fixed_on)), choice_points)
    return best[0]


def complete(problem: Problem, raw: InstanceGraph, activation=closure_activation):
    """Canonicalise a raw structure and derive its values.

    Returns ``(key, graph)`` where ``graph`` is None if the structure is not
    a solution.
    """
    if not space.wiring_ok(problem, raw):
        return None, None
    a_order, m_order, key = canonical_order(raw)
    g = relabel(problem, raw, a_order, m_order, keep_values=False)
    if not space.prepare(problem, g):
        return key, None
    if problem.policy.robust:
        support = space.robust_support(problem)
        base = activation(support, g)
        if base is None:
            return key, None
        space.apply_activation(support, g, base)
        if not space.participates(support, g):
            return key, None
        active = None
    else:
        active = activation(problem, g)
        if active is None:
            return key, None
    if not space.finalize(problem, g, active):
        return key, None
    return key, g


# -- search state -------------------------------------------------------------

@dataclass
class _State:
    graph: InstanceGraph
    active: set
    goals: dict = field(default_factory=dict)
    slots: dict = field(default_factory=dict)     # activity -> [(mode, type)]
    wants_output: set = field(default_factory=set)
    n_acts: int = 0
    n_msgs: int = 0
    feas: set | None = None

    touched: list = field(default_factory=list)

    def copy(self):
        return _State(_fork(self.graph), set(self.active), dict(self.goals),
                      {k: list(v) for k, v in self.slots.items()}, set(self.wants_output),
                      self.n_acts, self.n_msgs)


def _fork(g: InstanceGraph) -> InstanceGraph:
    """Cheap copy for search states; nodes are shared until wired (see _link)."""
    h = InstanceGraph.__new__(InstanceGraph)
    h.ontology = g.ontology
    h.workflows = g.workflows
    h.activities = dict(g.activities)
    h.messages = dict(g.messages)
    h._inputs = dict(g._inputs)
    h._outputs = dict(g._outputs)
    h._names = {ns: dict(t) for ns, t in g._names.items()}
    return h


def _link(s: _State, producer: ObjectId | None, consumer: ObjectId | None, m: ObjectId):
    """Wire ``m`` without mutating anything another state might share."""
    g = s.graph
    msg = copy.copy(g.messages[m])
    if producer is not None:
        assert msg.producer is None
        msg.producer = producer
        g._outputs[producer] = g._outputs[producer] + [m]
    if consumer is not None:
        assert msg.consumer is None
        msg.consumer = consumer
        g._inputs[consumer] = g._inputs[consumer] + [m]
    g.messages[m] = msg
    s.touched.append(m)


def _reaches(g: InstanceGraph, src: ObjectId, dst: ObjectId) -> bool:
    """Whether activity ``dst`` is downstream of activity ``src``."""
    stack, seen = [src], {src}
    while stack:
        a = stack.pop()
        if a == dst:
            return True
        for m in g._outputs[a]:
            c = g.messages[m].consumer
            if c is not None and c not in seen:
                seen.add(c)
                stack.append(c)
    return False


# requirement kinds, in tie-break order
GOAL, PRODUCE, CONSUME, SLOT, OUTPUT, MERGE, ACTIVATE = range(7)


class _Search:
    def __init__(self, problem: Problem):
        self.p = problem
        self.ont = problem.ontology
        self.comp = problem.fragments.composition
        self.ui = problem.policy.user_input_types
        self.types = space.candidate_types(problem)
        self.variants = space.addable_variants(problem)
        self.oa = space.offer_acceptance_available(problem)
        self.sigs = list(problem.catalog)
        self.bounds = problem.bounds
        self.frag = problem.fragments
        self.stats = SearchStats()
        self.fixed_off = {m for m, x in self.frag.messages.items() if x.active is False}
        self.off_acts = {a for a, x in self.frag.activities.items() if x.active is False}

    # -- helpers ---------------------------------------------------------

    def sub(self, t, sup):
        if t is None or sup is None:
            return False
        return self.ont.is_subtype(t, sup)

    def fits(self, slot, t):
        mode, st = slot
        if mode == "any":
            return True
        if mode == "exact":
            return t == st
        return self.sub(t, st)

    def free_pins(self, g: InstanceGraph):
        return [m for m in g.messages.values() if not m.added and m.consumer is None]

    def feasible(self, s: _State) -> set:
        """Over-approximation of the types a new message could be produced with."""
        if s.feas is None:
            s.feas = self._feasible(s)
        return s.feas

    def _feasible(self, s: _State) -> set:
        g = s.graph
        pin_types = {m.data_type for m in self.free_pins(g)}
        base = set()
        for a in g.activities.values():
            if not a.added:
                continue
            if a.kind is K.FORK:
                base.update(st for _, st in self._fork_type(s, a.id))
            elif a.kind is K.EXTERNAL_SIGNAL:
                base.update(self.ui)
        for a in s.wants_output:
            base.update(self._output_types(g.activities[a]))
        can_add = s.n_acts < self.bounds.max_added_activities
        feas = set(base)
        if can_add:
            feas.update(t for t in self.types if t in self.ui)
            feas.add(None)
            feas.update(pin_types)  # via a new fork on the pin
        changed = True
        while changed and can_add:
            changed = False

            def src(slot):
                return any(self.fits(slot, t) for t in pin_types) or \
                    any(self.fits(slot, t) for t in feas)

            for sig in self.sigs:
                t = sig.output_type
                if t not in feas and all(src(("sub", x)) for x in sig.input_types):
                    feas.add(t)
                    changed = True
            if self.oa and src(("sub", "Offer")) and src(("sub", "UserAcknowledgement")):
                for t in self.types:
                    if t not in feas and self.sub(t, "OfferAnswer"):
                        feas.add(t)
                        changed = True
        return feas

    def _fork_type(self, s, a):
        g = s.graph
        ins = g._inputs[a]
        if ins:
            return [("exact", g.messages[ins[0]].data_type)]
        return s.slots.get(a, [])

    def _output_types(self, act):
        if act.kind is K.TRANSFORMATION:
            return [self.p.sig(act.role).output_type]
        if act.role == OFFER_ACCEPTANCE:
            return [t for t in self.types if self.sub(t, "OfferAnswer")]
        if act.kind is K.JOIN:
            return [None]
        return []

    def can_output(self, s: _State, a: ObjectId, t) -> bool:
        act = s.graph.activities[a]
        if act.kind is K.FORK:
            return self._fork_type(s, a) == [("exact", t)]
        if act.kind is K.EXTERNAL_SIGNAL:
            return t in self.ui
        if a in s.wants_output:
            if act.kind is K.TRANSFORMATION:
                return self.p.sig(act.role).output_type == t
            if act.role == OFFER_ACCEPTANCE:
                return self.sub(t, "OfferAnswer")
            if act.kind is K.JOIN:
                return t is None
        return False

    # -- requirement generation -------------------------------------------

    def requirements(self, s: _State):
        g = s.graph
        reqs = []
        for gt in self.p.policy.goal_types:
            if gt not in s.goals:
                reqs.append((GOAL, 0, gt))
        for m in sorted(s.active):
            msg = g.messages[m]
            if msg.producer is None:
                reqs.append((PRODUCE, m.serial, m))
            if msg.consumer is None:
                reqs.append((CONSUME, m.serial, m))
        for a in sorted(s.slots):
            if s.slots[a]:
                reqs.append((SLOT, a.serial, a))
        for a in sorted(s.wants_output):
            reqs.append((OUTPUT, a.serial, a))
        for mg in open_merges(g, s.active):
            reqs.append((MERGE, mg.serial, mg))
        for a, x in self.frag.activities.items():
            if x.active is True:
                pins = g._outputs[a] or g._inputs[a]
                if not any(m in s.active for m in pins):
                    reqs.append((ACTIVATE, a.serial, a))
        return reqs

    def options(self, s: _State, req):
        kind, _, subj = req
        return {GOAL: self.opt_goal, PRODUCE: self.opt_produce, CONSUME: self.opt_consume,
                SLOT: self.opt_slot, OUTPUT: self.opt_output, MERGE: self.opt_merge, ACTIVATE: self.opt_activate}[kind](s, subj)

    def _finals(self, s):
        return [a.id for a in s.graph.activities.values() if a.added and a.kind is K.FINAL]

    def opt_goal(self, s, gt):
        g = s.graph
        out = []
        from .constraints import goal_messages
        for m in goal_messages(g, self.ont, gt):
            out.append(("goal_reuse", gt, m))
        finals = self._finals(s)
        for m in self.free_pins(g):
            if self.sub(m.data_type, gt):
                for f in finals:
                    out.append(("goal_pin", gt, m.id, f))
                out.append(("goal_pin", gt, m.id, None))
        feas = self.feasible(s)
        for t in self.types:
            if t in feas and self.sub(t, gt):
                for f in finals:
                    out.append(("goal_new", gt, t, f))
                out.append(("goal_new", gt, t, None))
        return out

    def opt_produce(self, s, m):
        g = s.graph
        t = g.messages[m].data_type
        out = []
        for a in sorted(x.id for x in g.activities.values() if x.added):
            if self.can_output(s, a, t):
                out.append(("wire_out", a, m))
        if t in self.ui:
            out.append(("new_producer", (K.EXTERNAL_SIGNAL, None), m, 0))
        for sig in self.sigs:
            if sig.output_type == t:
                out.append(("new_producer", (K.TRANSFORMATION, sig.name), m, 0))
        if self.oa and self.sub(t, "OfferAnswer"):
            out.append(("new_producer", (K.ACTION, OFFER_ACCEPTANCE), m, 0))
        if t is None:
            for k in range(2, self._join_cap(s) + 1):
                out.append(("new_producer", (K.JOIN, None), m, k))
        feas = self.feasible(s)
        if t in feas or any(p.data_type == t for p in self.free_pins(g)):
            out.append(("new_producer", (K.FORK, None), m, 0))
        return out

    def _join_cap(self, s):
        return (self.bounds.max_added_messages - s.n_msgs) + len(self.free_pins(s.graph)) + 1

    def _slot_spec(self, variant, k=0):
        kind, role = variant
        if kind is K.TRANSFORMATION:
            return [("sub", t) for t in self.p.sig(role).input_types]
        if role == OFFER_ACCEPTANCE:
            return [("sub", "Offer"), ("sub", "UserAcknowledgement")]
        if kind is K.JOIN:
            return [("any", None)] * k
        return []

    def opt_consume(self, s, m):
        g = s.graph
        t = g.messages[m].data_type
        out = []
        for f in self._finals(s):
            out.append(("wire_in", f, m, None))
        for a in sorted(s.slots):
            for i in _fitting_slots(self, s.slots[a], t):
                out.append(("wire_in", a, m, i))
        out.append(("new_consumer", (K.FINAL, None), m, 0, None))
        out.append(("new_consumer", (K.FORK, None), m, 0, None))
        for v in self.variants:
            if v[0] is K.TRANSFORMATION or v[1] == OFFER_ACCEPTANCE:
                for i in _fitting_slots(self, self._slot_spec(v), t):
                    out.append(("new_consumer", v, m, 0, i))
        for k in range(2, self._join_cap(s) + 1):
            out.append(("new_consumer", (K.JOIN, None), m, k, 0))
        return out

    def opt_slot(self, s, a):
        g = s.graph
        slot = s.slots[a][0]
        out = []
        for m in self.free_pins(g):
            if self.fits(slot, m.data_type):
                out.append(("fill_pin", a, m.id))
        feas = self.feasible(s)
        for t in self.types:
            if t in feas and self.fits(slot, t):
                out.append(("fill_new", a, t))
        return out

    def opt_output(self, s, a):
        g = s.graph
        act = g.activities[a]
        types = [x for _, x in self._fork_type(s, a)] if act.kind is K.FORK else self._output_types(act)
        out = []
        for m in sorted(s.active):
            if g.messages[m].producer is None and self.can_output(s, a, g.messages[m].data_type):
                out.append(("wire_out", a, m))
        for m in g.messages.values():
            if not m.added and m.producer is None and m.id not in s.active and m.data_type in types:
                out.append(("out_pin", a, m.id))
        for t in types:
            out.append(("out_new", a, t))
        return out

    def opt_merge(self, s, mg):
        g = s.graph
        return [("activate", m) for m in sorted(g._inputs[mg]) if _d1_ok(g, mg, m)]

    def opt_activate(self, s, a):
        g = s.graph
        return [("activate", m) for m in sorted(g._outputs[a] or g._inputs[a])]

    # -- applying options -----------------------------------------------

    def _new_activity(self, s, variant, k=0):
        kind, role = variant
        a = s.graph.add_activity(kind, self.comp, role=role, added=True)
        s.n_acts += 1
        spec = self._slot_spec(variant, k)
        if kind is K.FORK:
            spec = []
        s.slots[a] = spec
        return a

    def _new_message(self, s, t):
        m = s.graph.add_message(t, added=True, partial=True)
        s.n_msgs += 1
        return m

    def apply(self, s: _State, opt) -> bool:
        g = s.graph
        tag = opt[0]
        if tag == "goal_reuse":
            _, gt, m = opt
            s.goals[gt] = m
            s.active.add(m)
        elif tag in ("goal_pin", "goal_new"):
            _, gt, x, f = opt
            if f is None:
                f = self._new_activity(s, (K.FINAL, None))
            m = x if tag == "goal_pin" else self._new_message(s, x)
            _link(s, None, f, m)
            s.goals[gt] = m
            s.active.add(m)
        elif tag == "wire_out":
            _, a, m = opt
            _link(s, a, None, m)
            s.wants_output.discard(a)
        elif tag == "new_producer":
            _, variant, m, k = opt
            a = self._new_activity(s, variant, k)
            if variant[0] is K.FORK:
                s.slots[a] = [("exact", g.messages[m].data_type)]
            _link(s, a, None, m)
        elif tag == "wire_in":
            _, a, m, i = opt
            _link(s, None, a, m)
            if i is not None:
                del s.slots[a][i]
        elif tag == "new_consumer":
            _, variant, m, k, i = opt
            a = self._new_activity(s, variant, k)
            _link(s, None, a, m)
            if i is not None:
                del s.slots[a][i]
            if variant[0] is not K.FINAL:
                s.wants_output.add(a)
        elif tag == "fill_pin":
            _, a, m = opt
            _link(s, None, a, m)
            del s.slots[a][0]
            s.active.add(m)
        elif tag == "fill_new":
            _, a, t = opt
            m = self._new_message(s, t)
            _link(s, None, a, m)
            del s.slots[a][0]
            s.active.add(m)
        elif tag == "out_pin":
            _, a, m = opt
            _link(s, a, None, m)
            s.wants_output.discard(a)
            s.active.add(m)
        elif tag == "out_new":
            _, a, t = opt
            m = self._new_message(s, t)
            _link(s, a, None, m)
            s.wants_output.discard(a)
            s.active.add(m)
        elif tag == "activate":
            s.active.add(opt[1])
        else:
            raise AssertionError(tag)
        return self.consistent(s)

    def consistent(self, s: _State) -> bool:
        s.feas = None
        if s.n_acts > self.bounds.max_added_activities or s.n_msgs > self.bounds.max_added_messages:
            return False
        g = s.graph
        # every pending slot needs a fragment pin or a fresh message
        pending = sum(len(v) for v in s.slots.values())
        if pending > self.bounds.max_added_messages - s.n_msgs + len(self.free_pins(g)):
            return False
        if self.p.policy.robust:
            s.active = set(g.messages)
        else:
            close(g, s.active)
        if s.active & self.fixed_off:
            return False
        for a in self.off_acts:
            pins = g._outputs[a] or g._inputs[a]
            if any(m in s.active for m in pins):
                return False
        for mg in (a.id for a in g.activities.values() if a.kind is K.MERGE):
            if any(i in s.active and not _d1_ok(g, mg, i) for i in g._inputs[mg]):
                return False
        for m in s.touched:
            msg = g.messages[m]
            if msg.producer is not None and msg.consumer is not None \
                    and _reaches(g, msg.consumer, msg.producer):
                return False
        s.touched = []
        if space.transformation_depth(g) > self.bounds.max_transformation_depth:
            return False
        return self._offers_ok(s)

    def _offers_ok(self, s):
        g = s.graph
        for a in g.activities.values():
            if not a.added or a.role != OFFER_ACCEPTANCE:
                continue
            offer = [m for m in g._inputs[a.id] if self.sub(g.messages[m].data_type, "Offer")]
            answer = g._outputs[a.id]
            if not offer:
                continue
            src = _known_origin(g, offer[0])
            if src is _UNKNOWN:
                continue
            if src is None or src == self.comp:
                return False
            if answer:
                for d in _known_destinations(g, answer[0]):
                    if d is not _UNKNOWN and d != src:
                        return False
        return True

    # -- driver ----------------------------------------------------------

    def run(self) -> Iterator[InstanceGraph]:
        start = _State(self.frag.copy(), set())
        for m, x in self.frag.messages.items():
            if x.active is True:
                start.active.add(m)
        if find_cycle(start.graph) is not None or not self.consistent(start):
            return
        yield from self._dfs(start)

    def _dfs(self, s: _State):
        self.stats.nodes_explored += 1
        reqs = self.requirements(s)
        if not reqs:
            yield s.graph
            return
        best = None
        for r in reqs:
            opts = self.options(s, r)
            if best is None or len(opts) < len(best[1]):
                best = (r, opts)
                if not opts:
                    break
        _, opts = best
        if not opts:
            self.stats.backtracks += 1
            return
        for opt in opts:
            child = s.copy()
            if self.apply(child, opt):
                yield from self._dfs(child)
            else:
                self.stats.backtracks += 1


_UNKNOWN = object()


def _fitting_slots(engine, slots, t):
    """Indices of the distinct slots a message of type ``t`` may take."""
    seen, out = set(), []
    for i, slot in enumerate(slots):
        if slot not in seen and engine.fits(slot, t):
            seen.add(slot)
            out.append(i)
    return out


def _known_origin(g: InstanceGraph, m):
    seen = set()
    while True:
        p = g.messages[m].producer
        if p is None:
            return _UNKNOWN
        act = g.activities[p]
        if act.kind is K.FORK and act.added and m not in seen:
            seen.add(m)
            ins = g._inputs[p]
            if not ins:
                return _UNKNOWN
            m = ins[0]
            continue
        return act.owner


def _known_destinations(g: InstanceGraph, m):
    out, stack = [], [m]
    while stack:
        x = stack.pop()
        c = g.messages[x].consumer
        if c is None:
            out.append(_UNKNOWN)
            continue
        act = g.activities[c]
        if act.kind is K.FORK and act.added:
            outs = g._outputs[c]
            if not outs:
                out.append(_UNKNOWN)
            stack.extend(outs)
        else:
            out.append(act.owner)
    return out


def solutions(problem: Problem, stats: SearchStats | None = None) -> Iterator[Solution]:
    """All solutions in deterministic search order, without repeats."""
    problem.validate()
    engine = _Search(problem)
    if stats is not None:
        engine.stats = stats
    seen = set()
    for raw in engine.run():
        key, g = complete(problem, raw)
        if key is None or key in seen:
            continue
        seen.add(key)
        if g is None:
            continue
        yield Solution(g, problem, engine.stats)


def _finish(sol: Solution, stats: SearchStats, t0: float) -> Solution:
    stats.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    st = SearchStats(stats.nodes_explored, stats.backtracks,
                     len(sol.added_activities()), len(sol.added_messages()), stats.elapsed_ms)
    return Solution(sol.graph, sol.problem, st)


def compose(problem: Problem) -> Solution:
    """First solution in search order; raises :class:`Unsatisfiable` if none."""
    t0 = time.perf_counter()
    stats = SearchStats()
    for sol in solutions(problem, stats):
        return _finish(sol, stats, t0)
    stats.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    raise Unsatisfiable(stats)


def enumerate_solutions(problem: Problem, limit: int | None = None) -> list[Solution]:
    """Solutions in search order, at most ``limit`` (default: the problem's solution limit)."""
    t0 = time.perf_counter()
    limit = problem.bounds.solution_limit if limit is None else limit
    stats = SearchStats()
    out = []
    for sol in solutions(problem, stats):
        out.append(sol)
        if len(out) >= limit:
            break
    return [_finish(s, stats, t0) for s in out]
