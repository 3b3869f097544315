"""Classify the relation between two policies from tautology queries.

For each part (permit, deny) with terms t1, t2 over a shared vocabulary:

    fwd  = t1 ⇒ t2 is a tautology
    bwd  = t2 ⇒ t1 is a tautology
    disj = t1 ∧ t2 is a contradiction

The headline label conjoins the parts: Converge if fwd and bwd, Extend if
only fwd, Restrict if only bwd, Diverge if neither but disjoint, else Shuffle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .atomizer import AtomizedPair, atomize
from .errors import InternalInconsistency
from .model import UNKNOWN, AttributeSchema, PolicyTerm
from .rewrite import rewrite, to_ring
from .ring import RingPoly, TupleTerm, algebra_to_ring, sempair_to_terms
from .semantics import absolute_semantics
from . import terms as t


class Relation(enum.Enum):
    CONVERGE = "Converge"
    EXTEND = "Extend"
    RESTRICT = "Restrict"
    SHUFFLE = "Shuffle"
    DIVERGE = "Diverge"

    def __str__(self):
        return self.value

    def converse(self) -> "Relation":
        return {Relation.EXTEND: Relation.RESTRICT, Relation.RESTRICT: Relation.EXTEND}.get(self, self)


def decide(fwd: bool, bwd: bool, disj: bool) -> Relation:
    if fwd and bwd:
        return Relation.CONVERGE
    if fwd:
        return Relation.EXTEND
    if bwd:
        return Relation.RESTRICT
    return Relation.DIVERGE if disj else Relation.SHUFFLE


@dataclass(frozen=True)
class Queries:
    fwd: bool
    bwd: bool
    disj: bool

    @property
    def relation(self) -> Relation:
        return decide(self.fwd, self.bwd, self.disj)


def _one(r) -> bool:
    return r.is_one


def _zero(r) -> bool:
    return r.is_zero


def queries(t1: t.Expr, t2: t.Expr) -> Queries:
    memo: dict = {}  # t1 and t2 are normalized once for all three queries
    return Queries(
        fwd=_one(algebra_to_ring(t.Implies(t1, t2), memo)),
        bwd=_one(algebra_to_ring(t.Implies(t2, t1), memo)),
        disj=_zero(algebra_to_ring(t.And(t1, t2), memo)),
    )


def compare_terms(t1: t.Expr, t2: t.Expr) -> Relation:
    return queries(t1, t2).relation


# ---------------------------------------------------------------------------
# witnesses


REGIONS = ("in1not2", "in2not1", "inBoth")


@dataclass(frozen=True)
class Witness:
    kind: str
    assignment: dict
    request: Optional[dict] = None
    exact: bool = True

    def to_dict(self) -> dict:
        return {"kind": self.kind, "request": self.request, "exact": self.exact,
                "assignment": {k: v for k, v in sorted(self.assignment.items()) if v}}


def region(t1: t.Expr, t2: t.Expr, kind: str) -> t.Expr:
    if kind == "in1not2":
        return t.Minus(t1, t2)
    if kind == "in2not1":
        return t.Minus(t2, t1)
    if kind == "inBoth":
        return t.And(t1, t2)
    raise ValueError(f"unknown region {kind!r}")


def _minimal_model(p: RingPoly) -> dict:
    # the atoms of a smallest monomial, all others false, satisfy a nonzero ANF
    mono = min(p.monomials, key=lambda m: (len(m), sorted(m)))
    return {v: v in mono for v in p.variables()}


def _satisfy(p: RingPoly, candidates: list[str]) -> tuple[dict, bool]:
    """A model of p, preferring exactly one candidate true."""
    names = sorted(p.variables() | set(candidates))
    for c in candidates:
        env = {v: v == c for v in names}
        if p.evaluate(env):
            return env, True
    model = _minimal_model(p)
    one_hot = sum(model.values()) == 1 and any(model[c] for c in candidates if c in model)
    return {v: model.get(v, False) for v in names}, one_hot


def find_witness(t1: t.Expr, t2: t.Expr, kind: str,
                 pair: Optional[AtomizedPair] = None) -> Optional[Witness]:
    """A point in the requested region under the componentwise reading, or None."""
    r = algebra_to_ring(region(t1, t2, kind))
    if r.is_zero:
        return None
    comps = list(r.components) if isinstance(r, TupleTerm) else [r]
    names = pair.schema.names if pair is not None else ()
    disjoint = all(not (a.variables() & b.variables()) for a, b in combinations(comps, 2))
    env: dict = {}
    exact = True
    if disjoint:
        for i, c in enumerate(comps):
            if pair is not None and isinstance(r, TupleTerm) and i < len(names):
                cands = [a.id for a in pair.atoms_of(names[i])]
            else:
                cands = sorted(c.variables())
            part, ok = _satisfy(c, cands) if not c.is_one else ({}, True)
            env.update(part)
            exact &= ok
    else:
        prod = comps[0]
        for c in comps[1:]:
            prod = prod * c
        env = _minimal_model(prod)
        exact = False
    if pair is not None:
        for a in pair.vocabulary:
            env.setdefault(a.id, False)
    request = None
    if pair is not None:
        request, exact_req = _request_of(env, pair, r)
        exact &= exact_req
    return Witness(kind, env, request, exact)


def _request_of(env: dict, pair: AtomizedPair, r) -> tuple[dict, bool]:
    req, exact = {}, True
    comps = r.components if isinstance(r, TupleTerm) else None
    for i, name in enumerate(pair.schema.names):
        atoms = pair.atoms_of(name)
        on = [a for a in atoms if env.get(a.id)]
        if len(on) == 1:
            req[name] = on[0].representative()
        elif not on and comps is not None and comps[i].is_one:
            req[name] = atoms[0].representative()
        else:
            req[name] = on[0].representative() if on else UNKNOWN
            exact = False
    return req, exact


# ---------------------------------------------------------------------------
# reports


PARTS = ("permit", "deny")


@dataclass
class SimilarityReport:
    relation: Relation
    per_component: dict
    queries: dict
    vocabulary: tuple
    witnesses: dict = field(default_factory=dict)
    traces: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "relation": self.relation.value,
            "perComponent": {k: v.value for k, v in self.per_component.items()},
            "queries": {k: vars(q) for k, q in self.queries.items()},
            "vocabulary": list(self.vocabulary),
        }
        if self.witnesses:
            out["witnesses"] = {k: (w.to_dict() if w else None) for k, w in self.witnesses.items()}
        if self.traces:
            out["traces"] = {k: tr.lines() for k, tr in self.traces.items()}
        return out


def _trace_queries(part: str, a: t.Expr, b: t.Expr, q: Queries) -> dict:
    out = {}
    checks = {
        f"{part} ≈": (t.Equiv(a, b), None),
        f"{part} ⇒": (t.Implies(a, b), q.fwd),
        f"{part} ⇐": (t.Implies(b, a), q.bwd),
        f"{part} ∧": (t.And(a, b), q.disj),
    }
    for name, (expr, expected) in checks.items():
        result, tr = rewrite(expr)
        if expected is not None:
            got = result == t.ONE if not name.endswith("∧") else result == t.ZERO
            if got != expected:
                raise InternalInconsistency(f"rewrite and ring engines disagree on {name}")
        out[name] = tr
    return out


def classify_pair(pair: AtomizedPair, trace: bool = False, witness: bool = False) -> SimilarityReport:
    (p1, d1), (p2, d2) = sempair_to_terms(pair)
    terms = {"permit": (p1, p2), "deny": (d1, d2)}
    qs = {part: queries(*terms[part]) for part in PARTS}
    fwd = all(q.fwd for q in qs.values())
    bwd = all(q.bwd for q in qs.values())
    disj = all(q.disj for q in qs.values())
    report = SimilarityReport(
        relation=decide(fwd, bwd, disj),
        per_component={part: q.relation for part, q in qs.items()},
        queries=qs,
        vocabulary=tuple(a.id for a in pair.vocabulary),
    )
    if witness:
        for part in PARTS:
            for kind in REGIONS:
                report.witnesses[f"{part}:{kind}"] = find_witness(*terms[part], kind, pair)
    if trace:
        for part in PARTS:
            report.traces.update(_trace_queries(part, *terms[part], qs[part]))
    return report


def classify_terms(term1: PolicyTerm, term2: PolicyTerm, schema: AttributeSchema,
                   trace: bool = False, witness: bool = False) -> SimilarityReport:
    s1 = absolute_semantics(term1, schema)
    s2 = absolute_semantics(term2, schema)
    return classify_pair(atomize(s1, s2, schema), trace=trace, witness=witness)



def classify(xp1, xp2, trace: bool = False, witness: bool = False) -> SimilarityReport:
    """Compare two XACML documents (text, bytes or parsed nodes)."""
    from .xacml import parse_xacml, translate

    nodes = [parse_xacml(x) if isinstance(x, (str, bytes)) else x for x in (xp1, xp2)]
    tr = translate(*nodes)
    return classify_terms(*tr.terms, tr.schema, trace=trace, witness=witness)


def normal_form(e: t.Expr):
    """Fast-path normal form, checked against the rewrite engine's result."""
    fast = algebra_to_ring(e)
    slow, _ = rewrite(e)
    return fast, to_ring(slow)
