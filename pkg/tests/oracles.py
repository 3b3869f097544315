"""Brute-force reference implementations used by the test suite.

None of these touch the atomizer, the ring engine or the rewrite system.
"""
from __future__ import annotations

from itertools import chain, combinations, product

from policysim.model import (
    Assert, Binary, Choice, DenyAll, DenyOv, Empty, Minus, Neg, OMinus, Par, PermitAll,
    PermitOv, Rule, Seq, TriBool,
)

T, U, F = TriBool.T, TriBool.U, TriBool.F


# ---------------------------------------------------------------------------
# three-valued tables, transcribed row by row (row operand first)

AND_TABLE = {
    (T, T): T, (T, U): U, (T, F): F,
    (U, T): U, (U, U): U, (U, F): F,
    (F, T): F, (F, U): F, (F, F): F,
}
OR_TABLE = {
    (T, T): T, (T, U): T, (T, F): T,
    (U, T): T, (U, U): U, (U, F): U,
    (F, T): T, (F, U): U, (F, F): F,
}
OMINUS_TABLE = {
    (T, T): U, (T, U): U, (T, F): T,
    (U, T): U, (U, U): U, (U, F): U,
    (F, T): F, (F, U): F, (F, F): F,
}
NOT_TABLE = {T: F, U: U, F: T}
CORNER_TABLE = {T: T, U: F, F: F}


# ---------------------------------------------------------------------------
# componentwise membership oracle
#
# A policy term over a schema is evaluated to a pair of "boxes". A box holds
# one set of points per attribute, a point being any subset V of the raw
# domain. A value-set d holds at V iff V meets d; the full domain holds
# everywhere and the empty set nowhere. A box with an empty component is
# collapsed to all-empty, mirroring the tuple reading of the prover.


def _subsets(domain):
    items = sorted(domain)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


class BoxAlgebra:
    def __init__(self, schema):
        self.schema = schema
        self.points = [frozenset(_subsets(d)) for _, d in schema.slots]

    def collapse(self, comps):
        comps = tuple(comps)
        if any(not c for c in comps):
            return tuple(frozenset() for _ in comps)
        return comps

    def box(self, phi):
        comps = []
        for d, (_, dom), pts in zip(phi.components, self.schema.slots, self.points):
            if d == dom:
                comps.append(pts)
            else:
                comps.append(frozenset(v for v in pts if v & d))
        return self.collapse(comps)

    def bottom(self):
        return self.collapse(frozenset() for _ in self.points)

    def top(self):
        return tuple(self.points)

    def union(self, a, b):
        return self.collapse(x | y for x, y in zip(a, b))

    def inter(self, a, b):
        return self.collapse(x & y for x, y in zip(a, b))

    def diff(self, a, b):
        return self.collapse(x - y for x, y in zip(a, b))

    def semantics(self, term):
        """(accept box, deny box) of an abbreviation-free, ⊖-free term."""
        u, i, m = self.union, self.inter, self.diff
        if isinstance(term, Rule):
            p1, p2 = self.box(term.accept), self.box(term.deny)
            return m(p1, p2), m(p2, p1)
        if isinstance(term, Empty):
            return self.bottom(), self.bottom()
        if isinstance(term, DenyAll):
            return self.bottom(), self.top()
        if isinstance(term, PermitAll):
            return self.top(), self.bottom()
        if isinstance(term, Neg):
            a, d = self.semantics(term.body)
            return d, a
        if isinstance(term, Assert):
            return self.semantics(term.body)
        if isinstance(term, OMinus):
            raise ValueError("⊖ is outside the oracle's reach")
        a1, d1 = self.semantics(term.left)
        a2, d2 = self.semantics(term.right)
        if isinstance(term, Seq):
            return u(a1, m(a2, d1)), u(d1, m(d2, a1))
        if isinstance(term, PermitOv):
            return u(a1, a2), u(m(d1, a2), m(d2, a1))
        if isinstance(term, DenyOv):
            return u(m(a1, d2), m(a2, d1)), u(d1, d2)
        if isinstance(term, Par):
            return i(a1, a2), i(d1, d2)
        if isinstance(term, Choice):
            return m(u(a1, a2), u(d1, d2)), m(u(d1, d2), u(a1, a2))
        if isinstance(term, Minus):
            return m(a1, u(a2, d2)), m(d1, u(a2, d2))
        raise TypeError(term)

    def implies_everywhere(self, a, b):
        # (¬a ∪ b) componentwise, then collapsed, is the top box
        comps = self.collapse((pts - x) | y for x, y, pts in zip(a, b, self.points))
        return comps == self.top()

    def disjoint(self, a, b):
        return all(not c for c in self.inter(a, b))


def oracle_label(term1, term2, schema) -> str:
    from policysim.semantics import expand_abbreviations

    term1, term2 = expand_abbreviations(term1), expand_abbreviations(term2)
    alg = BoxAlgebra(schema)
    (a1, d1), (a2, d2) = alg.semantics(term1), alg.semantics(term2)
    fwd = alg.implies_everywhere(a1, a2) and alg.implies_everywhere(d1, d2)
    bwd = alg.implies_everywhere(a2, a1) and alg.implies_everywhere(d2, d1)
    disj = alg.disjoint(a1, a2) and alg.disjoint(d1, d2)
    if fwd and bwd:
        return "Converge"
    if fwd:
        return "Extend"
    if bwd:
        return "Restrict"
    return "Diverge" if disj else "Shuffle"


# ---------------------------------------------------------------------------
# pointwise set oracle for absolute semantics


def points(schema):
    names = schema.names
    for values in product(*(sorted(d) for _, d in schema.slots)):
        yield dict(zip(names, values))


# ---------------------------------------------------------------------------
# combining algorithms, coded from their descriptions
#
# `rules` is a list of (target tuple, is_permit); a rule applies to a fully
# specified request iff the request lies in its target.


def _outcomes(rules, point):
    return [("Permit" if permit else "Deny") if phi.contains(point) else "NotApplicable"
            for phi, permit in rules]


def permit_overrides(rules, point):
    out = _outcomes(rules, point)
    if "Permit" in out:
        return "Permit"
    return "Deny" if "Deny" in out else "NotApplicable"


def deny_overrides(rules, point):
    out = _outcomes(rules, point)
    if "Deny" in out:
        return "Deny"
    return "Permit" if "Permit" in out else "NotApplicable"


def first_applicable(rules, point):
    for o in _outcomes(rules, point):
        if o != "NotApplicable":
            return o
    return "NotApplicable"


def deny_unless_permit(rules, point):
    return "Permit" if "Permit" in _outcomes(rules, point) else "Deny"


def permit_unless_deny(rules, point):
    return "Deny" if "Deny" in _outcomes(rules, point) else "Permit"


def only_one_applicable(rules, point):
    applicable = [o for o in _outcomes(rules, point) if o != "NotApplicable"]
    if len(applicable) > 1:
        return "Indeterminate"
    return applicable[0] if applicable else "NotApplicable"


PROSE = {
    "permit-overrides": permit_overrides,
    "deny-overrides": deny_overrides,
    "first-applicable": first_applicable,
    "deny-unless-permit": deny_unless_permit,
    "permit-unless-deny": permit_unless_deny,
    "only-one-applicable": only_one_applicable,
}


def operator_count(term) -> int:
    if isinstance(term, Binary):
        return 1 + operator_count(term.left) + operator_count(term.right)
    if isinstance(term, (Neg, Assert)):
        return 1 + operator_count(term.body)
    return 0


# ---------------------------------------------------------------------------
# canonical naming of value-sets for printing


LETTERS = "xyzuvwabcdefghijklmnopqrst"


def canonical_names(*terms) -> dict:
    """Name each restricted (attribute, value-set) by order of first appearance
    in the printed terms, using x, y, z, u, v, w, ..."""
    from policysim.model import Effect, Scoped

    order: list = []

    def see(phi):
        if phi.is_bottom:
            return
        for key in phi.restricted():
            if key not in order:
                order.append(key)

    def go(term):
        if isinstance(term, Rule):
            see(term.accept)
            see(term.deny)
        elif isinstance(term, Effect):
            see(term.target)
        elif isinstance(term, Scoped):
            see(term.scope)
            go(term.body)
        elif isinstance(term, (Neg, Assert)):
            go(term.body)
        elif isinstance(term, Binary):
            go(term.left)
            go(term.right)

    for term in terms:
        go(term)
    return {key: LETTERS[i] for i, key in enumerate(order)}
