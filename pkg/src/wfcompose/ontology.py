"""Datatype ontologies for message typing.

An ontology is a multiple-inheritance DAG of named datatypes rooted at
``DataType``.  Every type carries its own attribute declarations and
inherits those of its ancestors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

ROOT = "DataType"


class OntologyError(Exception):
    pass


class UnknownType(OntologyError):
    def __init__(self, name):
        super().__init__(f"unknown type {name!r}")
        self.name = name


class AttributeConflict(OntologyError):
    pass


@dataclass(frozen=True)
class AttrKind:
    """Kind of a message attribute: ``int``, ``bool`` or an enumeration."""

    kind: str
    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("int", "bool", "enum"):
            raise ValueError(f"bad attribute kind {self.kind!r}")
        if self.kind == "enum":
            if not self.symbols:
                raise ValueError("enum needs at least one symbol")
            if len(set(self.symbols)) != len(self.symbols):
                raise ValueError(f"duplicate enum symbols in {self.symbols}")
        elif self.symbols:
            raise ValueError(f"{self.kind} takes no symbols")

    @classmethod
    def enum(cls, *symbols: str) -> AttrKind:
        return cls("enum", tuple(symbols))

    def accepts(self, value) -> bool:
        if self.kind == "bool":
            return isinstance(value, bool)
        if self.kind == "int":
            return isinstance(value, int) and not isinstance(value, bool) and value >= 0
        return isinstance(value, str) and value in self.symbols

    def default(self):
        if self.kind == "int":
            return 0
        if self.kind == "bool":
            return False
        return self.symbols[0]

    def __str__(self):
        if self.kind == "enum":
            return "enum(" + "|".join(self.symbols) + ")"
        return self.kind


INT = AttrKind("int")
BOOL = AttrKind("bool")
CURRENCY = AttrKind.enum("Euro", "Dollar", "Yen")


@dataclass(frozen=True)
class TypeNode:
    name: str
    parents: tuple[str, ...] = ()
    abstract: bool = False
    attributes: Mapping[str, AttrKind] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "attributes", dict(self.attributes))

    def __hash__(self):
        return hash((self.name, self.parents, self.abstract, tuple(sorted(self.attributes.items()))))


@dataclass(frozen=True)
class OntologyViolation:
    code: str  # CycleViolation | UnknownParent | Unrooted | AttributeConflict
    types: tuple[str, ...]
    detail: str

    def __str__(self):
        return f"{self.code} {' '.join(self.types)} : {self.detail}"


class Ontology:
    """Immutable set of :class:`TypeNode` keyed by name.

    Construction does not validate; call :func:`validate_ontology` for that.
    Queries raise :class:`UnknownType` for names that do not resolve.
    """

    def __init__(self, types: Iterable[TypeNode], root: str = ROOT):
        self._types: dict[str, TypeNode] = {}
        for t in types:
            if t.name in self._types:
                raise OntologyError(f"type {t.name!r} declared twice")
            self._types[t.name] = t
        self.root = root
        self._ancestors: dict[str, frozenset[str]] = {}

    def __contains__(self, name) -> bool:
        return name in self._types

    def __iter__(self):
        return iter(self._types.values())

    def __len__(self):
        return len(self._types)

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return self.root == other.root and self._types == other._types

    def __repr__(self):
        return f"Ontology({list(self._types)!r})"

    def names(self) -> list[str]:
        return list(self._types)

    def get(self, name: str) -> TypeNode:
        try:
            return self._types[name]
        except KeyError:
            raise UnknownType(name) from None

    def ancestors(self, name: str) -> frozenset[str]:
        """Strict ancestors of ``name`` (parents, grandparents, ...)."""
        cached = self._ancestors.get(name)
        if cached is not None:
            return cached
        self.get(name)
        seen: set[str] = set()
        stack = list(self._types[name].parents)
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            node = self._types.get(p)
            if node is None:
                raise UnknownType(p)
            stack.extend(node.parents)
        result = frozenset(seen)
        self._ancestors[name] = result
        return result

    def is_subtype(self, a: str, b: str) -> bool:
        self.get(b)
        return a == b or b in self.ancestors(a)

    def attributes_of(self, name: str) -> dict[str, AttrKind]:
        merged: dict[str, AttrKind] = {}
        origin: dict[str, str] = {}
        for t in [name, *sorted(self.ancestors(name))]:
            for attr, kind in self._types[t].attributes.items():
                if attr in merged and merged[attr] != kind:
                    raise AttributeConflict(
                        f"{name}: attribute {attr!r} is {merged[attr]} in {origin[attr]} "
                        f"but {kind} in {t}")
                merged.setdefault(attr, kind)
                origin.setdefault(attr, t)
        return dict(sorted(merged.items()))

    def subtypes(self, name: str) -> list[str]:
        """All types ``t`` with ``t ⊑ name``, in declaration order."""
        return [t for t in self._types if self.is_subtype(t, name)]

    def concrete_types(self) -> list[str]:
        return [t.name for t in self._types.values() if not t.abstract]

    def extended(self, types: Iterable[TypeNode]) -> Ontology:
        """Return a copy with ``types`` added.

        A type that already exists is merged: parents are appended, new
        attributes added, and an enum attribute may be redeclared with a
        superset of its symbols.
        """
        merged = dict(self._types)
        for t in types:
            old = merged.get(t.name)
            if old is None:
                merged[t.name] = t
                continue
            if t.abstract != old.abstract:
                raise OntologyError(f"type {t.name!r} redeclared with different abstract flag")
            attrs = dict(old.attributes)
            for attr, kind in t.attributes.items():
                prev = attrs.get(attr)
                if prev is not None and prev != kind:
                    widening = (prev.kind == kind.kind == "enum"
                                and kind.symbols[:len(prev.symbols)] == prev.symbols)
                    if not widening:
                        raise AttributeConflict(
                            f"{t.name}: attribute {attr!r} redeclared as {kind} (was {prev})")
                attrs[attr] = kind
            parents = old.parents + tuple(p for p in t.parents if p not in old.parents)
            merged[t.name] = TypeNode(t.name, parents, old.abstract, attrs)
        return Ontology(merged.values(), self.root)


def is_subtype(ont: Ontology, a: str, b: str) -> bool:
    return ont.is_subtype(a, b)


def attributes_of(ont: Ontology, t: str) -> dict[str, AttrKind]:
    return ont.attributes_of(t)


def validate_ontology(ont: Ontology) -> list[OntologyViolation]:
    out: list[OntologyViolation] = []
    names = ont.names()
    unknown = False
    for n in names:
        for p in ont.get(n).parents:
            if p not in ont:
                unknown = True
                out.append(OntologyViolation("UnknownParent", (n, p), f"{n} inherits undeclared {p}"))
    if ont.root not in ont:
        out.append(OntologyViolation("Unrooted", (ont.root,), "root type is not declared"))
    if unknown:
        return out

    # cycles: three-colour DFS over parent edges
    colour = dict.fromkeys(names, 0)
    cyclic: list[tuple[str, ...]] = []

    def visit(n, path):
        colour[n] = 1
        for p in ont.get(n).parents:
            if colour[p] == 1:
                cyclic.append(tuple(path[path.index(p):]) if p in path else (p,))
            elif colour[p] == 0:
                visit(p, path + [p])
        colour[n] = 2

    for n in names:
        if colour[n] == 0:
            visit(n, [n])
    for cyc in cyclic:
        out.append(OntologyViolation("CycleViolation", cyc, "inheritance cycle " + " -> ".join(cyc)))
    if cyclic:
        return out

    for n in names:
        if n != ont.root and ont.root in ont and ont.root not in ont.ancestors(n):
            out.append(OntologyViolation("Unrooted", (n,), f"{n} does not inherit {ont.root}"))
        try:
            ont.attributes_of(n)
        except AttributeConflict as exc:
            out.append(OntologyViolation("AttributeConflict", (n,), str(exc)))
    return out


def predefined_ontology() -> Ontology:
    """The standard offer/answer vocabulary used by user interaction schemes."""
    return Ontology([
        TypeNode(ROOT, (), abstract=True),
        TypeNode("Offer", (ROOT,), abstract=True, attributes={"price": INT, "currency": CURRENCY}),
        TypeNode("OfferAnswer", (ROOT,), abstract=True, attributes={"accepted": BOOL}),
        TypeNode("UserAcknowledgement", (ROOT,)),
        TypeNode("ProducerOffer", ("Offer",), attributes={"size": INT}),
        TypeNode("ProducerOfferAnswer", ("OfferAnswer",)),
        TypeNode("ShipperOffer", ("Offer",), attributes={"deliveryDays": INT}),
        TypeNode("ShipperOfferAnswer", ("OfferAnswer",)),
    ])
