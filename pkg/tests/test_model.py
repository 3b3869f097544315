from __future__ import annotations

import pytest

from policysim.errors import InternalInconsistency, SchemaMismatch, UnboundAttribute
from policysim.model import (
    OTHER, UNKNOWN, AttributeSchema, ConstraintTuple, Decision, DenyAll, Effect, Neg,
    PermitOv, Request, Seq, TriBool, Verdict, chain, classify_decision, contains_ominus,
    OMinus, show_term, tuple_complement,
)

T, U, F = TriBool.T, TriBool.U, TriBool.F


@pytest.fixture
def schema():
    return AttributeSchema.from_values({"role": ["admin", "user"], "action": ["read"]})


def test_schema_adds_residual_value(schema):
    assert schema.names == ("role", "action")
    assert schema.domain("role") == {"admin", "user", OTHER}
    assert schema.arity == 2


def test_schema_rejects_duplicates_and_empty_domains():
    with pytest.raises(SchemaMismatch):
        AttributeSchema((("a", frozenset({"x"})), ("a", frozenset({"y"}))))
    with pytest.raises(SchemaMismatch):
        AttributeSchema((("a", frozenset()),))


def test_unknown_attribute(schema):
    with pytest.raises(UnboundAttribute):
        schema.index("nope")


def test_tuple_ops(schema):
    a = schema.restrict(role=["admin"])
    b = schema.restrict(role=["user"], action=["read"])
    assert (a | b).components[0] == {"admin", "user"}
    assert (a & b).components[0] == frozenset()
    assert a.restricted() == [("role", frozenset({"admin"}))]
    assert schema.top().is_top and schema.bottom().is_bottom
    assert tuple_complement(a).components == (frozenset({"user", OTHER}), frozenset())


def test_tuple_outside_domain(schema):
    with pytest.raises(SchemaMismatch):
        schema.restrict(role=["root"])
    with pytest.raises(SchemaMismatch):
        ConstraintTuple(schema, (frozenset(),))


def test_tuple_contains(schema):
    phi = schema.restrict(role=["admin"])
    assert phi.contains({"role": "admin", "action": "read"})
    assert not phi.contains({"role": "user", "action": "read"})


def test_tribool_basics():
    assert (T & U) is U and (F & U) is F
    assert (T | U) is T and (F | U) is U
    assert ~U is U and ~T is F
    assert T.minus(U) is U and T.minus(F) is T
    assert U.corner() is F and T.corner() is T


def test_request_of_maps_unknown_values(schema):
    req = Request.of(schema, {"role": "guest"})
    assert req["role"] == OTHER
    assert req["action"] == UNKNOWN
    with pytest.raises(UnboundAttribute):
        Request.of(schema, {"role": "admin"}, strict=True)


def test_request_direct_validation(schema):
    with pytest.raises(UnboundAttribute):
        Request(schema, (("role", "admin"),))
    with pytest.raises(SchemaMismatch):
        Request(schema, (("role", "root"), ("action", "read")))


@pytest.mark.parametrize("permit,deny,verdict", [
    (T, F, Verdict.PERMIT), (F, T, Verdict.DENY), (F, F, Verdict.NOT_APPLICABLE),
    (U, F, Verdict.INDETERMINATE_P), (F, U, Verdict.INDETERMINATE_D),
    (U, U, Verdict.INDETERMINATE_PD), (T, U, Verdict.PERMIT), (U, T, Verdict.DENY),
])
def test_classify_decision(permit, deny, verdict):
    assert classify_decision(Decision(permit, deny)) is verdict


def test_classify_decision_conflict():
    with pytest.raises(InternalInconsistency):
        classify_decision(Decision(T, T))


def test_chain_and_show(schema):
    a = Effect(schema.restrict(role=["admin"]), True)
    b = Effect(schema.top(), False)
    term = chain(Seq, [a, b, DenyAll()])
    assert show_term(term) == "((role=admin)→p.()→d.0)"
    assert show_term(Neg(PermitOv(a, b))) == "¬((role=admin)→p⌊⌊()→d)"
    names = {("role", frozenset({"admin"})): "x"}
    assert show_term(a, names) == "(x)→p"
    with pytest.raises(ValueError):
        chain(Seq, [])


def test_contains_ominus(schema):
    a = Effect(schema.top(), True)
    assert contains_ominus(Neg(OMinus(a, a)))
    assert not contains_ominus(Seq(a, a))
