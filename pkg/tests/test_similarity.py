from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, strategies as st

from policysim import terms as t
from policysim.atomizer import atomize
from policysim.errors import IndeterminateUnsupported
from policysim.model import AttributeSchema, DenyAll, Effect, OMinus, PermitAll, Seq
from policysim.ring import TupleTerm, algebra_to_ring, sempair_to_terms
from policysim.semantics import absolute_semantics
from policysim.similarity import (
    REGIONS, Relation, classify, classify_terms, compare_terms, decide, find_witness,
    normal_form, region,
)

import oracles
from strategies import policy_terms, random_schema, random_term

S = AttributeSchema.from_values({"role": ["admin", "user"], "act": ["read", "write"]})
ADMIN = Effect(S.restrict(role=["admin"]), True)
STAFF = Effect(S.restrict(role=["admin", "user"]), True)


@pytest.mark.parametrize("fwd,bwd,disj,rel", [
    (True, True, False, Relation.CONVERGE), (True, True, True, Relation.CONVERGE),
    (True, False, False, Relation.EXTEND), (False, True, True, Relation.RESTRICT),
    (False, False, True, Relation.DIVERGE), (False, False, False, Relation.SHUFFLE),
])
def test_decide(fwd, bwd, disj, rel):
    assert decide(fwd, bwd, disj) is rel


def test_converse():
    assert Relation.EXTEND.converse() is Relation.RESTRICT
    assert Relation.SHUFFLE.converse() is Relation.SHUFFLE


def test_fixture_pair_converges(policy_p, policy_q):
    report = classify(policy_p, policy_q)
    assert report.relation is Relation.CONVERGE
    assert set(report.per_component.values()) == {Relation.CONVERGE}


@pytest.mark.parametrize("a,b,rel", [
    (ADMIN, STAFF, Relation.EXTEND),
    (STAFF, ADMIN, Relation.RESTRICT),
    (ADMIN, ADMIN, Relation.CONVERGE),
    (PermitAll(), DenyAll(), Relation.DIVERGE),
    (ADMIN, Effect(S.restrict(role=["admin"]), False), Relation.DIVERGE),
    (ADMIN, Effect(S.restrict(act=["read"]), True), Relation.SHUFFLE),
    # the deny part (⊤ − admin) keeps a full act component and collapses
    (Seq(ADMIN, DenyAll()), STAFF, Relation.EXTEND),
])
def test_small_relations(a, b, rel):
    assert classify_terms(a, b, S).relation is rel
    assert oracles.oracle_label(a, b, S) == rel.value


def test_values_of_one_attribute_may_co_occur():
    # bag-valued attributes: a request may carry both roles at once
    user = Effect(S.restrict(role=["user"]), True)
    assert classify_terms(ADMIN, user, S).relation is Relation.SHUFFLE


def test_ominus_is_rejected():
    with pytest.raises(IndeterminateUnsupported):
        classify_terms(OMinus(ADMIN, STAFF), ADMIN, S)


@given(st.data())
def test_converse_symmetry(data):
    a = data.draw(policy_terms(S))
    b = data.draw(policy_terms(S))
    assert classify_terms(b, a, S).relation is classify_terms(a, b, S).relation.converse()


def _pair_terms(a, b, schema):
    pair = atomize(absolute_semantics(a, schema), absolute_semantics(b, schema), schema)
    return pair, sempair_to_terms(pair)


def _holds(ring, env):
    comps = ring.components if isinstance(ring, TupleTerm) else (ring,)
    return all(c.evaluate({v: env.get(v, False) for v in c.variables()}) for c in comps)


def test_witnesses_lie_in_their_regions():
    rng = random.Random(5)
    found = 0
    for _ in range(150):
        schema = random_schema(rng)
        a, b = random_term(rng, schema), random_term(rng, schema)
        pair, ((p1, d1), (p2, d2)) = _pair_terms(a, b, schema)
        for x, y in ((p1, p2), (d1, d2)):
            for kind in REGIONS:
                ring = algebra_to_ring(region(x, y, kind))
                w = find_witness(x, y, kind, pair)
                if ring.is_zero:
                    assert w is None
                    continue
                found += 1
                assert _holds(ring, w.assignment), (kind, w)
                assert set(w.request) == set(schema.names)
    assert found > 100


def test_report_serializes(policy_p, policy_q):
    report = classify(policy_p, policy_q, trace=True, witness=True)
    data = json.loads(json.dumps(report.to_dict(), ensure_ascii=False))
    assert data["relation"] == "Converge"
    # the permit parts collapse under the componentwise reading
    assert data["witnesses"]["permit:inBoth"] is None
    both = data["witnesses"]["deny:inBoth"]
    assert both["exact"] is True
    assert both["request"] == {"resource-id": "secret.txt", "action-id": "write", "subject-id": "Alice"}
    assert data["traces"]["permit ≈"][-1].startswith("-> 1")


def test_witness_for_restriction():
    s1 = AttributeSchema.from_values({"role": ["admin", "user"]})
    staff = Effect(s1.restrict(role=["admin", "user"]), True)
    admin = Effect(s1.restrict(role=["admin"]), True)
    report = classify_terms(staff, admin, s1, witness=True)
    assert report.relation is Relation.RESTRICT
    w = report.witnesses["permit:in1not2"]
    assert w.exact and w.request == {"role": "user"}
    assert report.witnesses["permit:in2not1"] is None


def test_traces_agree_with_fast_path():
    rng = random.Random(8)
    for _ in range(40):
        schema = random_schema(rng, max_attrs=2, max_values=2)
        a, b = random_term(rng, schema, depth=2), random_term(rng, schema, depth=2)
        report = classify_terms(a, b, schema, trace=True)
        assert len(report.traces) == 8


def test_compare_terms_and_normal_form():
    x, y = t.Var("x"), t.Var("y")
    assert compare_terms(x, t.Or(x, y)) is Relation.EXTEND
    fast, slow = normal_form(t.Minus(x, y))
    assert fast == slow
