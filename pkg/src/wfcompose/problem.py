"""Composition problems and their solutions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .constraints import ConstraintId, PolicyConfig, TransformationSig, check_structural
from .model import COMPOSITION, InstanceGraph
from .ontology import Ontology, validate_ontology


class MalformedProblem(Exception):
    pass


@dataclass(frozen=True)
class Bounds:
    max_added_activities: int = 8
    max_added_messages: int = 12
    max_transformation_depth: int = 1
    solution_limit: int = 1

    def __post_init__(self):
        for name in ("max_added_activities", "max_added_messages", "max_transformation_depth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.solution_limit < 1:
            raise ValueError("solution_limit must be positive")


@dataclass
class Problem:
    ontology: Ontology
    fragments: InstanceGraph
    catalog: tuple[TransformationSig, ...] = ()
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    bounds: Bounds = field(default_factory=Bounds)
    # ontology entries declared by the problem file itself, re-emitted verbatim
    declared_types: tuple = ()

    def sig(self, name: str) -> TransformationSig:
        for s in self.catalog:
            if s.name == name:
                return s
        raise KeyError(name)

    def validate(self):
        """Raise :class:`MalformedProblem` if the problem breaks its invariants."""
        issues = [str(v) for v in validate_ontology(self.ontology)]
        g = self.fragments
        if g.ontology is not self.ontology and g.ontology != self.ontology:
            issues.append("fragments use a different ontology")
        comp = g.composition
        if comp is None:
            issues.append("fragments lack the composition workflow")
        elif g.workflows[comp].name != COMPOSITION:
            issues.append(f"composition workflow must be named {COMPOSITION}")
        for a in g.activities.values():
            if a.owner == comp:
                issues.append(f"activity {a.name} is already composition-owned")
        issues += [str(v) for v in check_structural(g, self.ontology) if v.constraint is ConstraintId.S1
                   and "requires attribute" not in v.detail]
        names = [s.name for s in self.catalog]
        if len(set(names)) != len(names):
            issues.append("duplicate transformation names in catalog")
        typed = [t for s in self.catalog for t in (*s.input_types, s.output_type)]
        typed += list(self.policy.goal_types) + sorted(self.policy.user_input_types)
        issues += [f"unknown type {t}" for t in typed if t not in self.ontology]
        if not self.policy.goal_types:
            issues.append("no goal types")
        if issues:
            raise MalformedProblem("; ".join(issues))


@dataclass
class SearchStats:
    nodes_explored: int = 0
    backtracks: int = 0
    added_activities: int = 0
    added_messages: int = 0
    elapsed_ms: int = 0

    def as_dict(self, with_time=False) -> dict:
        d = {"nodesExplored": self.nodes_explored, "backtracks": self.backtracks,
             "addedActivities": self.added_activities, "addedMessages": self.added_messages}
        if with_time:
            d["elapsedMs"] = self.elapsed_ms
        return d


@dataclass
class Solution:
    graph: InstanceGraph
    problem: Problem
    stats: SearchStats = field(default_factory=SearchStats)

    def added_activities(self):
        return [a for a in self.graph.activities.values() if a.added]

    def added_messages(self):
        return [m for m in self.graph.messages.values() if m.added]
