"""Problem and solution files.

Both are JSON documents with these top-level sections, emitted in this
order: ``ontology``, ``workflows``, ``activities``, ``messages``,
``catalog``, ``userInputs``, ``goals``, ``policy``, ``bounds`` and, for
solutions, ``stats``.  Array entries are emitted one per line so files diff
cleanly and every object has its own line number for error reporting.

The ``ontology`` section normally lists only types beyond (or refining) the
predefined vocabulary; a section that declares the root type itself is
self-contained and replaces the predefined vocabulary.  The composition workflow is implicit: it is always
created after the listed workflows and called ``Composition``.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
from dataclasses import dataclass, field

from .constraints import PolicyConfig, TransformationSig
from .model import (
    COMPOSITION,
    ActivityKind,
    InstanceGraph,
    ModelError,
    Namespace,
)
from .ontology import ROOT, AttrKind, Ontology, OntologyError, TypeNode, predefined_ontology, validate_ontology
from .problem import Bounds, MalformedProblem, Problem, SearchStats, Solution

SECTIONS = ("ontology", "workflows", "activities", "messages", "catalog",
            "userInputs", "goals", "policy", "bounds", "stats")


class ParseError(Exception):
    """Malformed document; ``line`` is 1-based."""

    def __init__(self, line: int, detail: str):
        super().__init__(f"line {line}: {detail}")
        self.line = line
        self.detail = detail


class SemanticError(Exception):
    """Well-formed document that does not describe a valid problem."""

    def __init__(self, detail: str, line: int | None = None):
        super().__init__(f"line {line}: {detail}" if line else detail)
        self.line = line
        self.detail = detail


# -- located JSON -------------------------------------------------------------

class _Obj(dict):
    line = 1


def _loads(text: str):
    """``json.loads`` that remembers the starting line of every object."""
    decoder = json.JSONDecoder()

    def parse_object(s_and_end, *args):
        s, end = s_and_end
        value, stop = json.decoder.JSONObject(s_and_end, *args)
        obj = _Obj(value)
        obj.line = s.count("\n", 0, end) + 1
        return obj, stop

    decoder.parse_object = parse_object
    decoder.scan_once = json.scanner.py_make_scanner(decoder)
    try:
        return decoder.decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None


def _line(obj) -> int:
    return getattr(obj, "line", 1)


def _keys(obj, allowed: set, required: set = frozenset(), what="entry"):
    if not isinstance(obj, dict):
        raise ParseError(_line(obj), f"{what} must be an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(_line(obj), f"unknown key(s) in {what}: {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(_line(obj), f"{what} lacks {', '.join(missing)}")


def _expect(value, kind, line, what):
    ok = isinstance(value, kind) and not (kind is int and isinstance(value, bool))
    if not ok:
        raise ParseError(line, f"{what} must be {kind.__name__}")
    return value


def _names(value, line, what) -> list[str]:
    _expect(value, list, line, what)
    for v in value:
        _expect(v, str, line, f"entries of {what}")
    return value


# -- parsing ------------------------------------------------------------------

@dataclass
class Document:
    """Everything a problem or solution file describes."""

    graph: InstanceGraph
    # None when the document has no catalog section
    catalog: tuple[TransformationSig, ...] | None = None
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    bounds: Bounds = field(default_factory=Bounds)
    stats: dict | None = None


def _attr_kind(spec, line) -> AttrKind:
    if spec in ("int", "bool"):
        return AttrKind(spec)
    if isinstance(spec, dict) and set(spec) == {"enum"} and isinstance(spec["enum"], list):
        try:
            return AttrKind.enum(*_names(spec["enum"], line, "enum"))
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
    raise ParseError(line, f"bad attribute kind {spec!r}")


def _parse_ontology(entries) -> Ontology:
    nodes = []
    for e in entries:
        _keys(e, {"name", "parents", "abstract", "attributes"}, {"name"}, "type")
        line = _line(e)
        attrs = _expect(e.get("attributes", {}), dict, line, "attributes")
        nodes.append(TypeNode(
            _expect(e["name"], str, line, "type name"),
            tuple(_names(e.get("parents", []), line, "parents")),
            _expect(e.get("abstract", False), bool, line, "abstract"),
            {k: _attr_kind(v, line) for k, v in attrs.items()},
        ))
    seen = set()
    for n, e in zip(nodes, entries):
        if n.name in seen:
            raise SemanticError(f"type {n.name} declared twice", _line(e))
        seen.add(n.name)
    try:
        if any(n.name == ROOT for n in nodes):
            ont = Ontology(nodes)
        else:
            ont = predefined_ontology().extended(nodes)
    except OntologyError as exc:
        raise SemanticError(str(exc)) from None
    problems = validate_ontology(ont)
    if problems:
        bad = problems[0]
        line = next((_line(e) for e in entries if e.get("name") in bad.types), None)
        raise SemanticError(str(bad), line)
    return ont


def parse_document(text: str, instance: bool = False) -> Document:
    """Parse a problem file, or with ``instance`` a solution/instance file."""
    doc = _loads(text)
    allowed = set(SECTIONS) if instance else set(SECTIONS) - {"stats"}
    _keys(doc, allowed, what="document")
    for key in ("ontology", "workflows", "activities", "messages", "catalog", "userInputs", "goals"):
        _expect(doc.get(key, []), list, _line(doc), key)

    ont = _parse_ontology(doc.get("ontology", []))
    g = InstanceGraph(ont)

    def semantic(detail, obj):
        raise SemanticError(detail, _line(obj))

    for name in _names(doc.get("workflows", []), _line(doc), "workflows"):
        if name == COMPOSITION:
            raise SemanticError(f"workflow name {COMPOSITION} is reserved", _line(doc))
        try:
            g.add_workflow(name)
        except ModelError as exc:
            raise SemanticError(str(exc), _line(doc)) from None
    comp = g.add_workflow(COMPOSITION, is_composition=True)

    act_keys = {"name", "kind", "owner", "roleTag", "active"} | ({"added"} if instance else set())
    for e in doc.get("activities", []):
        _keys(e, act_keys, {"name", "kind", "owner"}, "activity")
        line = _line(e)
        name = _expect(e["name"], str, line, "activity name")
        if not instance and name.startswith("_"):
            semantic(f"activity name {name!r}: leading underscore is reserved", e)
        try:
            kind = ActivityKind.parse(_expect(e["kind"], str, line, "kind"))
        except ValueError:
            semantic(f"unknown activity kind {e['kind']!r}", e)
        owner = g.lookup(Namespace.WORKFLOW, _expect(e["owner"], str, line, "owner"))
        if owner is None or (owner == comp and not instance):
            semantic(f"activity {name}: unknown owner {e['owner']}", e)
        active = e.get("active")
        if active is not None:
            _expect(active, bool, line, "active")
        role = e.get("roleTag")
        if role is not None:
            _expect(role, str, line, "roleTag")
        try:
            g.add_activity(kind, owner, active=active, role=role, name=name,
                           added=_expect(e.get("added", False), bool, line, "added"))
        except ModelError as exc:
            semantic(str(exc), e)

    msg_keys = {"name", "type", "attributes", "active", "producer", "consumer"}
    if instance:
        msg_keys |= {"order", "added"}
    for e in doc.get("messages", []):
        _keys(e, msg_keys, {"name"}, "message")
        line = _line(e)
        name = _expect(e["name"], str, line, "message name")
        if not instance and name.startswith("_"):
            semantic(f"message name {name!r}: leading underscore is reserved", e)
        t = e.get("type")
        if t is not None and _expect(t, str, line, "type") not in ont:
            semantic(f"message {name}: unknown type {t}", e)
        active = e.get("active")
        if active is not None:
            _expect(active, bool, line, "active")
        attrs = _expect(e.get("attributes", {}), dict, line, "attributes")
        try:
            m = g.add_message(t, active=active, attributes=attrs, name=name, partial=True,
                              added=_expect(e.get("added", False), bool, line, "added"))
        except (ModelError, OntologyError) as exc:
            semantic(f"message {name}: {exc}", e)
        g.messages[m].order = _expect(e.get("order", 0), int, line, "order")
        for end in ("producer", "consumer"):
            if end not in e:
                continue
            a = g.lookup(Namespace.ACTIVITY, _expect(e[end], str, line, end))
            if a is None:
                semantic(f"message {name}: unknown {end} {e[end]}", e)
            (g.connect_output if end == "producer" else g.connect_input)(a, m)

    catalog = []
    for e in doc.get("catalog", []):
        _keys(e, {"name", "inputs", "output"}, {"name", "inputs", "output"}, "transformation")
        line = _line(e)
        ins = _names(e["inputs"], line, "inputs")
        out = _expect(e["output"], str, line, "output")
        for t in (*ins, out):
            if t not in ont:
                semantic(f"transformation {e['name']}: unknown type {t}", e)
        try:
            catalog.append(TransformationSig(_expect(e["name"], str, line, "name"), tuple(ins), out))
        except ValueError as exc:
            semantic(str(exc), e)
    if len({s.name for s in catalog}) != len(catalog):
        raise SemanticError("duplicate transformation name in catalog")

    user = _names(doc.get("userInputs", []), _line(doc), "userInputs")
    goals = _names(doc.get("goals", []), _line(doc), "goals")
    for t in user + goals:
        if t not in ont:
            raise SemanticError(f"unknown type {t}", _line(doc))

    pol = doc.get("policy", _Obj())
    _keys(pol, {"maxPrice", "robust"}, what="policy")
    max_price = pol.get("maxPrice")
    if max_price is not None:
        _expect(max_price, int, _line(pol), "maxPrice")
    policy = PolicyConfig(tuple(goals), frozenset(user), max_price,
                          _expect(pol.get("robust", False), bool, _line(pol), "robust"))

    b = doc.get("bounds", _Obj())
    names = {"maxAddedActivities": "max_added_activities", "maxAddedMessages": "max_added_messages",
             "maxTransformationDepth": "max_transformation_depth", "solutionLimit": "solution_limit"}
    _keys(b, set(names), what="bounds")
    try:
        bounds = Bounds(**{names[k]: _expect(v, int, _line(b), k) for k, v in b.items()})
    except ValueError as exc:
        raise SemanticError(str(exc), _line(b)) from None

    stats = None
    if "stats" in doc:
        stats = dict(_expect(doc["stats"], dict, _line(doc), "stats"))
    return Document(g, tuple(catalog) if "catalog" in doc else None, policy, bounds, stats)


def parse_problem(text: str) -> Problem:
    d = parse_document(text)
    problem = Problem(d.graph.ontology, d.graph, d.catalog or (), d.policy, d.bounds)
    try:
        problem.validate()
    except MalformedProblem as exc:
        raise SemanticError(str(exc)) from None
    return problem


def parse_instance(text: str) -> InstanceGraph:
    return parse_document(text, instance=True).graph


# -- emission -----------------------------------------------------------------

def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=False)


def _attr_spec(kind: AttrKind):
    return {"enum": list(kind.symbols)} if kind.kind == "enum" else kind.kind


def declared_types(ont: Ontology) -> list[TypeNode]:
    """The ``ontology`` entries that reproduce ``ont`` when parsed.

    Types new or refined relative to the predefined ones, or every type if
    ``ont`` is not an extension of the predefined vocabulary.
    """
    base = predefined_ontology()
    extra = [t for t in ont if t.name not in base or base.get(t.name) != t]
    try:
        if base.extended(extra) == ont:
            return extra
    except OntologyError:
        pass
    return list(ont)


def _type_entry(t: TypeNode) -> dict:
    d = {"name": t.name, "parents": list(t.parents)}
    if t.abstract:
        d["abstract"] = True
    if t.attributes:
        d["attributes"] = {k: _attr_spec(v) for k, v in t.attributes.items()}
    return d


def _array(key: str, items: list) -> str:
    if not items:
        return f'  "{key}": []'
    body = ",\n".join("    " + _dump(x) for x in items)
    return f'  "{key}": [\n{body}\n  ]'


def emit_document(graph: InstanceGraph, catalog=(), policy: PolicyConfig | None = None,
                  bounds: Bounds | None = None, stats: dict | None = None, instance: bool = True) -> str:
    """Serialise ``graph`` and its context; ``instance`` adds orders and markers."""
    policy = policy or PolicyConfig()
    bounds = bounds or Bounds()
    comp = graph.composition
    workflows = [w.name for w in sorted(graph.workflows.values(), key=lambda w: w.id) if w.id != comp]
    acts = []
    for a in sorted(graph.activities.values(), key=lambda a: a.id):
        d = {"name": a.name, "kind": a.kind.value, "owner": graph.name_of(a.owner)}
        if a.role is not None:
            d["roleTag"] = a.role
        if a.active is not None:
            d["active"] = a.active
        if instance and a.added:
            d["added"] = True
        acts.append(d)
    msgs = []
    for m in sorted(graph.messages.values(), key=lambda m: m.id):
        d = {"name": m.name}
        if m.data_type is not None:
            d["type"] = m.data_type
        if m.attributes:
            d["attributes"] = dict(m.attributes)
        if m.active is not None:
            d["active"] = m.active
        if m.producer is not None:
            d["producer"] = graph.name_of(m.producer)
        if m.consumer is not None:
            d["consumer"] = graph.name_of(m.consumer)
        if instance:
            d["order"] = m.order
            if m.added:
                d["added"] = True
        msgs.append(d)
    pol = {} if policy.max_price is None else {"maxPrice": policy.max_price}
    pol["robust"] = policy.robust
    parts = [
        _array("ontology", [_type_entry(t) for t in declared_types(graph.ontology)]),
        f'  "workflows": {_dump(workflows)}',
        _array("activities", acts),
        _array("messages", msgs),
        _array("catalog", [{"name": s.name, "inputs": list(s.input_types), "output": s.output_type}
                           for s in catalog]),
        f'  "userInputs": {_dump(sorted(policy.user_input_types))}',
        f'  "goals": {_dump(list(policy.goal_types))}',
        f'  "policy": {_dump(pol)}',
        '  "bounds": ' + _dump({"maxAddedActivities": bounds.max_added_activities,
                                "maxAddedMessages": bounds.max_added_messages,
                                "maxTransformationDepth": bounds.max_transformation_depth,
                                "solutionLimit": bounds.solution_limit}),
    ]
    if stats is not None:
        parts.append(f'  "stats": {_dump(stats)}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def emit_problem(problem: Problem) -> str:
    return emit_document(problem.fragments, problem.catalog, problem.policy, problem.bounds, instance=False)


def emit_solution(solution: Solution) -> str:
    p = solution.problem
    return emit_document(solution.graph, p.catalog, p.policy, p.bounds, solution.stats.as_dict())


def stats_of(doc: Document) -> SearchStats | None:
    if doc.stats is None:
        return None
    s = doc.stats
    return SearchStats(s.get("nodesExplored", 0), s.get("backtracks", 0),
                       s.get("addedActivities", 0), s.get("addedMessages", 0))
