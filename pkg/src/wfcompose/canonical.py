"""Canonical labelling of composition-added objects.

Fragment objects are fixed points.  Added activities and messages are
ordered by colour refinement over the wiring; remaining ties are broken by
individualising every member of the first ambiguous cell and keeping the
lexicographically smallest encoding, so isomorphic extensions get the same
labelling no matter in which order they were built.
"""

from __future__ import annotations

from .model import InstanceGraph, ObjectId
from .problem import Problem, Solution


def _neighbours(graph: InstanceGraph, added: set[ObjectId]) -> dict[ObjectId, list]:
    nb: dict[ObjectId, list] = {}
    for oid in added:
        if oid in graph.activities:
            nb[oid] = [(0, m) for m in graph._inputs[oid]] + [(1, m) for m in graph._outputs[oid]]
        else:
            m = graph.messages[oid]
            nb[oid] = [(2, m.producer), (3, m.consumer)]
    return nb


def _rank(sigs: dict) -> dict:
    levels = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
    return {k: levels[s] for k, s in sigs.items()}


def _refine(colour: dict, nb: dict) -> dict:
    n_cells = len(set(colour.values()))
    while True:
        sigs = {}
        for v, edges in nb.items():
            lab = []
            for rel, o in edges:
                if o is None:
                    lab.append((rel, 0, -1))
                elif o in colour:
                    lab.append((rel, 1, colour[o]))
                else:
                    lab.append((rel, 0, o.serial))
            sigs[v] = (colour[v], tuple(sorted(lab)))
        new = _rank(sigs)
        k = len(set(new.values()))
        if k == n_cells:
            return new
        colour, n_cells = new, k


def canonical_order(graph: InstanceGraph) -> tuple[list[ObjectId], list[ObjectId], tuple]:
    """Return (activity order, message order, canonical key) for added objects."""
    acts = sorted(a.id for a in graph.activities.values() if a.added)
    msgs = sorted(m.id for m in graph.messages.values() if m.added)
    added = set(acts) | set(msgs)
    n_frag_acts = len(graph.activities) - len(acts)
    nb = _neighbours(graph, added)
    init = {}
    for a in acts:
        node = graph.activities[a]
        init[a] = (0, node.kind.value, node.role or "")
    for m in msgs:
        init[m] = (1, graph.messages[m].data_type or "")
    colour = _refine(_rank(init), nb) if added else {}

    pins = [m.id for m in graph.messages.values() if not m.added
            and ((m.producer is not None and graph.activities[m.producer].added)
                 or (m.consumer is not None and graph.activities[m.consumer].added))]

    def encode(col):
        a_order = sorted(acts, key=col.__getitem__)
        m_order = sorted(msgs, key=col.__getitem__)
        new_idx = {a: n_frag_acts + i for i, a in enumerate(a_order)}

        def ref(a):
            if a is None:
                return -1
            return new_idx.get(a, a.serial)

        key = (
            tuple((graph.activities[a].kind.value, graph.activities[a].role or "") for a in a_order),
            tuple((graph.messages[m].data_type or "", ref(graph.messages[m].producer),
                   ref(graph.messages[m].consumer)) for m in m_order),
            tuple((p.serial, ref(graph.messages[p].producer), ref(graph.messages[p].consumer))
                  for p in sorted(pins)),
        )
        return key, a_order, m_order

    best = None

    def search(col):
        nonlocal best
        cells: dict[int, list] = {}
        for v, c in col.items():
            cells.setdefault(c, []).append(v)
        ambiguous = [c for c, vs in cells.items() if len(vs) > 1]
        if not ambiguous:
            cand = encode(col)
            if best is None or cand[0] < best[0]:
                best = cand
            return
        cell = sorted(cells[min(ambiguous)])
        for v in cell:
            col2 = {k: 2 * c for k, c in col.items()}
            col2[v] -= 1
            search(_refine(col2, nb))

    search(colour)
    key, a_order, m_order = best
    return a_order, m_order, key


def relabel(problem: Problem, graph: InstanceGraph, a_order, m_order, keep_values=True) -> InstanceGraph:
    """Rebuild ``graph`` from the fragments with added objects in the given order."""
    g = problem.fragments.copy()
    comp = g.composition
    amap, mmap = {}, {}
    for a in a_order:
        old = graph.activities[a]
        amap[a] = g.add_activity(old.kind, comp, role=old.role, added=True)
    for m in m_order:
        old = graph.messages[m]
        mmap[m] = g.add_message(old.data_type, added=True, partial=True)
    for m in m_order:
        old = graph.messages[m]
        g.connect_output(amap[old.producer], mmap[m])
        g.connect_input(amap[old.consumer], mmap[m])
    for oid, frag in problem.fragments.messages.items():
        old = graph.messages[oid]
        if frag.producer is None and old.producer is not None:
            g.connect_output(amap[old.producer], oid)
        if frag.consumer is None and old.consumer is not None:
            g.connect_input(amap[old.consumer], oid)
    if keep_values:
        inv_a = {v: k for k, v in amap.items()}
        inv_m = {v: k for k, v in mmap.items()}
        for a in g.activities.values():
            a.active = graph.activities[inv_a.get(a.id, a.id)].active
        for m in g.messages.values():
            src = graph.messages[inv_m.get(m.id, m.id)]
            m.active, m.order, m.attributes = src.active, src.order, dict(src.attributes)
    return g


def canonical_key(graph: InstanceGraph) -> tuple:
    return canonical_order(graph)[2]


def canonicalize(solution: Solution) -> Solution:
    a_order, m_order, _ = canonical_order(solution.graph)
    g = relabel(solution.problem, solution.graph, a_order, m_order, keep_values=True)
    return Solution(g, solution.problem, solution.stats)
