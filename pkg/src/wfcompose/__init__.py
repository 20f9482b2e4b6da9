"""Workflow composition as bounded configuration.

Partner workflow fragments are extended with composition-owned glue
(forks, joins, transformations, user signals, offer acceptance) until every
constraint holds and the goal datatypes reach a composition final node.
"""

from __future__ import annotations

from .constraints import (
    ConstraintId,
    PolicyConfig,
    TransformationSig,
    Violation,
    check_all,
    render,
)
from .model import (
    COMPOSITION,
    OFFER_ACCEPTANCE,
    ActivityKind,
    CycleError,
    InstanceGraph,
    Namespace,
    ObjectId,
    assign_orders,
)
from .ontology import Ontology, TypeNode, predefined_ontology, validate_ontology
from .problem import Bounds, MalformedProblem, Problem, SearchStats, Solution
from .search import Unsatisfiable, compose, enumerate_solutions

__all__ = [
    "COMPOSITION", "OFFER_ACCEPTANCE", "ActivityKind", "Bounds", "ConstraintId", "CycleError",
    "InstanceGraph", "MalformedProblem", "Namespace", "ObjectId", "Ontology", "PolicyConfig",
    "Problem", "SearchStats", "Solution", "TransformationSig", "TypeNode", "Unsatisfiable",
    "Violation", "assign_orders", "check_all", "compose", "enumerate_solutions",
    "predefined_ontology", "render", "validate_ontology",
]
