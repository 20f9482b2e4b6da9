"""Exhaustive reference enumerator for small problems.

Generates every composition extension within the bounds directly (added
activity multisets, pin attachments, added message multisets), pushes
each through the same derivation pipeline as the search, and computes
activation by trying message subsets in (size, lexicographic) order.  It
shares the definition of the solution space with the engine but none of
its search logic, so agreement between the two is a real check.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from math import comb

from . import space
from .model import ARITY, ActivityKind, InstanceGraph, ObjectId
from .problem import Problem
from .search import complete


K = ActivityKind


class BoundsTooLarge(Exception):
    """The product of choices exceeds what brute force can cover."""


def subset_activation(problem: Problem, graph: InstanceGraph) -> set[ObjectId] | None:
    """Smallest valid active set by exhaustive (size, lexicographic) search.

    Dangling messages can never be active and fixed flags are fixed, so the
    subsets range over the remaining wired messages only.
    """
    frag = problem.fragments
    forced, free = set(), []
    for m in sorted(graph.messages):
        msg = graph.messages[m]
        fixed = frag.messages[m].active if m in frag.messages else None
        wired = msg.producer is not None and msg.consumer is not None
        if fixed is True:
            if not wired:
                return None
            forced.add(m)
        elif fixed is None and wired:
            free.append(m)
    for k in range(len(free) + 1):
        for subset in combinations(free, k):
            chosen = forced.union(subset)
            space.apply_activation(problem, graph, chosen)
            if space.activation_valid(problem, graph):
                return chosen
    return None


def _type_domain(problem: Problem, variant, types):
    """Types a message leaving an added activity of ``variant`` may carry."""
    kind, role = variant
    if kind is K.JOIN:
        return [None]
    if kind is K.EXTERNAL_SIGNAL:
        return [t for t in types if t in problem.policy.user_input_types]
    if kind is K.TRANSFORMATION:
        out = problem.sig(role).output_type
        return [t for t in types if t == out]
    return types


def _degree_ok(kind, n_in, n_out, final=True):
    lo_i, hi_i, lo_o, hi_o = ARITY[kind]
    if (hi_i is not None and n_in > hi_i) or (hi_o is not None and n_out > hi_o):
        return False
    return not final or (n_in >= lo_i and n_out >= lo_o)


def estimate(problem: Problem) -> int:
    b = problem.bounds
    v = len(space.addable_variants(problem))
    t = len(space.candidate_types(problem))
    pins = sum(1 for m in problem.fragments.messages.values()
               if m.producer is None or m.consumer is None)
    total = 0
    for n in range(b.max_added_activities + 1):
        acts = comb(v + n - 1, n)
        pairs = n * (n - 1)
        msgs = sum(comb(pairs + k - 1, k) * t ** k for k in range(b.max_added_messages + 1)) if pairs else 1
        total += acts * msgs * (n + 1) ** pins
    return total


def brute_force(problem: Problem, limit: int = 3_000_000) -> dict[tuple, InstanceGraph]:
    """Every solution keyed by canonical key."""
    problem.validate()
    if estimate(problem) > limit:
        raise BoundsTooLarge(f"about {estimate(problem)} candidate structures")
    frag = problem.fragments
    b = problem.bounds
    variants = space.addable_variants(problem)
    types = space.candidate_types(problem)
    comp = frag.composition
    open_in = [m for m, x in frag.messages.items() if x.producer is None]
    open_out = [m for m, x in frag.messages.items() if x.consumer is None]
    found: dict[tuple, InstanceGraph] = {}

    for n in range(b.max_added_activities + 1):
        for kinds in combinations_with_replacement(variants, n):
            pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
            for prod_pins in product([None, *range(n)], repeat=len(open_in)):
                for cons_pins in product([None, *range(n)], repeat=len(open_out)):
                    deg_in = [0] * n
                    deg_out = [0] * n
                    for p in prod_pins:
                        if p is not None:
                            deg_out[p] += 1
                    for c in cons_pins:
                        if c is not None:
                            deg_in[c] += 1
                    if not all(_degree_ok(kinds[i][0], deg_in[i], deg_out[i], final=False) for i in range(n)):
                        continue
                    for k in range(b.max_added_messages + 1):
                        for wiring in combinations_with_replacement(pairs, k):
                            di, do = list(deg_in), list(deg_out)
                            for i, j in wiring:
                                do[i] += 1
                                di[j] += 1
                            if not all(_degree_ok(kinds[i][0], di[i], do[i]) for i in range(n)):
                                continue
                            domains = [_type_domain(problem, kinds[i], types) for i, _ in wiring]
                            for typing in product(*domains):
                                g = frag.copy()
                                ids = [g.add_activity(kind, comp, role=role, added=True) for kind, role in kinds]
                                for (i, j), t in zip(wiring, typing):
                                    m = g.add_message(t, added=True, partial=True)
                                    g.connect_output(ids[i], m)
                                    g.connect_input(ids[j], m)
                                for m, p in zip(open_in, prod_pins):
                                    if p is not None:
                                        g.connect_output(ids[p], m)
                                for m, c in zip(open_out, cons_pins):
                                    if c is not None:
                                        g.connect_input(ids[c], m)
                                key, sol = complete(problem, g, activation=subset_activation)
                                if sol is not None and key not in found:
                                    found[key] = sol
    return found
