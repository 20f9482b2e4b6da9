from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfcompose.ontology import (
    BOOL,
    CURRENCY,
    INT,
    ROOT,
    AttrKind,
    AttributeConflict,
    Ontology,
    OntologyError,
    TypeNode,
    UnknownType,
    predefined_ontology,
    validate_ontology,
)


def test_predefined_vocabulary():
    ont = predefined_ontology()
    assert validate_ontology(ont) == []
    assert ont.is_subtype("ShipperOffer", "Offer")
    assert ont.is_subtype("ProducerOffer", ROOT)
    assert not ont.is_subtype("Offer", "ShipperOffer")
    assert not ont.is_subtype("ProducerOfferAnswer", "Offer")
    assert ont.attributes_of("ProducerOffer") == {"currency": CURRENCY, "price": INT, "size": INT}
    assert ont.attributes_of("ShipperOfferAnswer") == {"accepted": BOOL}
    assert set(ont.concrete_types()) == {"UserAcknowledgement", "ProducerOffer", "ProducerOfferAnswer",
                                         "ShipperOffer", "ShipperOfferAnswer"}


def test_unknown_type_raises():
    with pytest.raises(UnknownType):
        predefined_ontology().is_subtype("Nope", ROOT)


def test_validation_codes():
    cyc = Ontology([TypeNode(ROOT, (), True), TypeNode("A", ("B",)), TypeNode("B", ("A",))])
    assert {v.code for v in validate_ontology(cyc)} == {"CycleViolation"}
    dangling = Ontology([TypeNode(ROOT, (), True), TypeNode("A", ("Missing",))])
    assert [v.code for v in validate_ontology(dangling)] == ["UnknownParent"]
    island = Ontology([TypeNode(ROOT, (), True), TypeNode("A", ())])
    assert [v.code for v in validate_ontology(island)] == ["Unrooted"]
    clash = Ontology([TypeNode(ROOT, (), True), TypeNode("A", (ROOT,), attributes={"x": INT}),
                      TypeNode("B", (ROOT,), attributes={"x": BOOL}), TypeNode("C", ("A", "B"))])
    assert [v.code for v in validate_ontology(clash)] == ["AttributeConflict"]
    with pytest.raises(AttributeConflict):
        clash.attributes_of("C")


def test_extension_merges_and_widens_enums():
    base = predefined_ontology()
    ont = base.extended([
        TypeNode("Size", (ROOT,), attributes={"size": INT}),
        TypeNode("Offer", (ROOT,), abstract=True, attributes={"currency": AttrKind.enum("Euro", "Dollar", "Yen", "Pound")}),
    ])
    assert ont.attributes_of("ShipperOffer")["currency"].symbols[-1] == "Pound"
    assert "Size" in ont and validate_ontology(ont) == []
    with pytest.raises(AttributeConflict):
        base.extended([TypeNode("Offer", (ROOT,), abstract=True, attributes={"price": BOOL})])
    with pytest.raises(OntologyError):
        base.extended([TypeNode("Offer", (ROOT,), abstract=False)])


def test_attribute_kinds():
    assert INT.accepts(3) and not INT.accepts(-1) and not INT.accepts(True)
    assert BOOL.accepts(False) and not BOOL.accepts(0)
    assert CURRENCY.accepts("Yen") and not CURRENCY.accepts("Pound")
    assert (INT.default(), BOOL.default(), CURRENCY.default()) == (0, False, "Euro")
    with pytest.raises(ValueError):
        AttrKind("float")


@st.composite
def random_dags(draw):
    n = draw(st.integers(1, 9))
    types = [TypeNode(ROOT, (), True)]
    names = [ROOT]
    for i in range(n):
        parents = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
        types.append(TypeNode(f"T{i}", tuple(parents)))
        names.append(f"T{i}")
    return Ontology(types)


def closure(ont: Ontology) -> set[tuple[str, str]]:
    """Reflexive-transitive closure of the parent relation, Warshall style."""
    names = ont.names()
    rel = {(a, a) for a in names} | {(t.name, p) for t in ont for p in t.parents}
    for k, i, j in itertools.product(names, repeat=3):
        if (i, k) in rel and (k, j) in rel:
            rel.add((i, j))
    return rel


@settings(max_examples=150, deadline=None)
@given(random_dags())
def test_subtype_matches_transitive_closure(ont):
    expected = closure(ont)
    names = ont.names()
    assert validate_ontology(ont) == []
    for a, b in itertools.product(names, repeat=2):
        assert ont.is_subtype(a, b) == ((a, b) in expected)
        if a != b and ont.is_subtype(a, b):
            assert not ont.is_subtype(b, a)
