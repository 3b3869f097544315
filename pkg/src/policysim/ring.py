"""Boolean ring normal forms and the tautology prover.

A ``RingPoly`` is the algebraic normal form: an XOR-set of AND-monomials,
each monomial a frozenset of atom ids (the empty monomial is 1, the empty
polynomial is 0). Set semantics give x⊕x→0 and x∗x→x for free, so two
polynomials denote the same function iff they are equal.

``algebra_to_ring`` computes the same normal form that exhaustive use of the
rewrite rules reaches (see ``policysim.rewrite``), by direct GF(2) arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .atomizer import AtomizedPair
from .errors import ArityMismatch, IndeterminateUnsupported
from .semantics import (
    Bottom, Box, Compl, CornerL, CornerR, Diff, Inter, OMinusSet, SemPair, SetExpr,
    Top, Union, has_ominus,
)
from . import terms as t


class RingPoly:
    __slots__ = ("monomials",)

    def __init__(self, monomials: Iterable[frozenset] = ()):
        self.monomials = frozenset(monomials)

    @classmethod
    def var(cls, name: str) -> "RingPoly":
        return cls([frozenset([name])])

    @classmethod
    def const(cls, b: bool) -> "RingPoly":
        return ONE if b else ZERO

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def is_one(self) -> bool:
        return self.monomials == _ONE_SET

    def __eq__(self, other):
        return isinstance(other, RingPoly) and self.monomials == other.monomials

    def __hash__(self):
        return hash(self.monomials)

    def __xor__(self, other: "RingPoly") -> "RingPoly":
        return RingPoly(self.monomials ^ other.monomials)

    def __mul__(self, other: "RingPoly") -> "RingPoly":
        if self.is_zero or other.is_zero:
            return ZERO
        if self.is_one:
            return other
        if other.is_one:
            return self
        acc = set()
        for a in self.monomials:
            for b in other.monomials:
                m = a | b
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return RingPoly(acc)

    # boolean-algebra views, via the rings-to-algebra identities
    def __or__(self, other):
        return self * other ^ self ^ other

    def __and__(self, other):
        return self * other

    def __invert__(self):
        return self ^ ONE

    def minus(self, other):
        return self ^ self * other

    def implies(self, other):
        return self * other ^ self ^ ONE

    def equiv(self, other):
        return self ^ other ^ ONE

    def variables(self) -> set[str]:
        return set().union(*self.monomials) if self.monomials else set()

    def evaluate(self, env: Mapping[str, bool]) -> bool:
        out = False
        for m in self.monomials:
            if all(env[v] for v in m):
                out = not out
        return out

    def sorted_monomials(self) -> list[tuple[str, ...]]:
        return sorted((tuple(sorted(m)) for m in self.monomials), key=lambda m: (len(m), m))

    def to_expr(self) -> t.Expr:
        mons = []
        for m in self.sorted_monomials():
            mons.append(t.mul(*(t.Var(v) for v in m)) if m else t.ONE)
        return t.xor(*mons) if mons else t.ZERO

    def show(self, rename: Mapping[str, str] | None = None) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for m in self.sorted_monomials():
            parts.append("*".join((rename or {}).get(v, v) for v in m) if m else "1")
        return " + ".join(parts)

    def __repr__(self):
        return f"RingPoly({self.show()})"


_ONE_SET = frozenset([frozenset()])
ZERO = RingPoly()
ONE = RingPoly(_ONE_SET)


@dataclass(frozen=True)
class TupleTerm:
    """Componentwise ring terms. A zero component collapses the whole tuple
    to zeros and an all-one tuple reads as 1."""

    components: tuple[RingPoly, ...]

    @classmethod
    def make(cls, comps: Iterable[RingPoly]) -> "TupleTerm":
        comps = tuple(comps)
        if any(c.is_zero for c in comps):
            comps = (ZERO,) * len(comps)
        return cls(comps)

    @property
    def arity(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    @property
    def is_one(self) -> bool:
        return all(c.is_one for c in self.components)

    def show(self, rename=None) -> str:
        if self.is_one:
            return "1"
        if self.is_zero:
            return "0"
        return "(" + ", ".join(c.show(rename) for c in self.components) + ")"


Ring = RingPoly | TupleTerm


def _broadcast(a: Ring, b: Ring) -> tuple[TupleTerm, TupleTerm]:
    if isinstance(a, TupleTerm) and isinstance(b, TupleTerm):
        if a.arity != b.arity:
            raise ArityMismatch(f"tuples of arity {a.arity} and {b.arity}")
        return a, b
    if isinstance(a, RingPoly):
        a, b = b, a
        swapped = True
    else:
        swapped = False
    if not (b.is_zero or b.is_one):
        raise ArityMismatch("non-constant scalar combined with a tuple")
    b = TupleTerm((b,) * a.arity)
    return (b, a) if swapped else (a, b)


def _lift(op):
    def apply(a: Ring, b: Ring) -> Ring:
        if isinstance(a, RingPoly) and isinstance(b, RingPoly):
            return op(a, b)
        a, b = _broadcast(a, b)
        return TupleTerm.make(op(x, y) for x, y in zip(a.components, b.components))
    return apply


_BINARY = {
    t.Or: _lift(RingPoly.__or__),
    t.And: _lift(RingPoly.__and__),
    t.Minus: _lift(RingPoly.minus),
    t.Implies: _lift(RingPoly.implies),
    t.Equiv: _lift(RingPoly.equiv),
}
_xor2 = _lift(RingPoly.__xor__)
_mul2 = _lift(RingPoly.__mul__)


def algebra_to_ring(e: t.Expr, _memo=None) -> Ring:
    """Normal form of an algebra or ring term (scalar or tuple).

    Shared subterms are normalized once, so terms built as DAGs stay cheap.
    """
    memo = {} if _memo is None else _memo
    key = id(e)
    if key not in memo:
        memo[key] = (_to_ring(e, memo), e)
    return memo[key][0]


def _to_ring(e: t.Expr, memo: dict) -> Ring:
    if isinstance(e, t.Var):
        return RingPoly.var(e.name)
    if isinstance(e, t.Const):
        return RingPoly.const(e.truth)
    if isinstance(e, t.FTup):
        return TupleTerm.make((ZERO,) * e.n)
    if isinstance(e, t.TTup):
        return TupleTerm.make((ONE,) * e.n)
    if isinstance(e, t.Tup):
        comps = [algebra_to_ring(c, memo) for c in e.items]
        if any(isinstance(c, TupleTerm) for c in comps):
            raise ArityMismatch("nested tuples are not supported")
        return TupleTerm.make(comps)
    if isinstance(e, t.Not):
        v = algebra_to_ring(e.body, memo)
        if isinstance(v, TupleTerm):
            return TupleTerm.make(~c for c in v.components)
        return ~v
    if isinstance(e, (t.Xor, t.Mul)):
        op = _xor2 if isinstance(e, t.Xor) else _mul2
        out = algebra_to_ring(e.args[0], memo)
        for a in e.args[1:]:
            out = op(out, algebra_to_ring(a, memo))
        return out
    if isinstance(e, t.BinOp):
        return _BINARY[type(e)](algebra_to_ring(e.left, memo), algebra_to_ring(e.right, memo))
    raise TypeError(f"not a term: {e!r}")


normalize = algebra_to_ring


def is_tautology(e: t.Expr, trace: bool = False):
    """True iff `e` normalizes to 1. With trace=True, returns (bool, trace)
    computed by the rewrite system instead."""
    if trace:
        from .rewrite import rewrite
        result, tr = rewrite(e)
        return result == t.ONE, tr
    return algebra_to_ring(e).is_one


def is_contradiction(e: t.Expr) -> bool:
    return algebra_to_ring(e).is_zero


# ---------------------------------------------------------------------------
# from semantic pairs to terms


def set_to_expr(e: SetExpr, pair: AtomizedPair, _memo=None) -> t.Expr:
    """Algebra term of a set expression; shared nodes map to shared terms."""
    memo = {} if _memo is None else _memo
    key = id(e)
    if key not in memo:
        memo[key] = (_set_to_expr(e, pair, memo), e)
    return memo[key][0]


def _set_to_expr(e: SetExpr, pair: AtomizedPair, memo: dict) -> t.Expr:
    schema = pair.schema
    if isinstance(e, Box):
        comps = []
        for values, (name, domain) in zip(e.tup.components, schema.slots):
            if values == domain:
                comps.append(t.TRUE)
            elif not values:
                comps.append(t.FALSE)
            else:
                atoms = sorted(a.id for a in pair.atoms_for(name, values))
                comps.append(t.disjunction(t.Var(a) for a in atoms))
        return t.Tup(tuple(comps))
    if isinstance(e, Bottom):
        return t.FTup(e.arity)
    if isinstance(e, Top):
        return t.TTup(e.arity)
    if isinstance(e, Compl):
        return t.Not(set_to_expr(e.body, pair, memo))
    if isinstance(e, (CornerL, CornerR)):
        # without ⊖ underneath nothing is indeterminate and corners are identities
        if has_ominus(e.body):
            raise IndeterminateUnsupported("corner operator over an indeterminate subterm")
        return set_to_expr(e.body, pair, memo)
    if isinstance(e, OMinusSet):
        raise IndeterminateUnsupported("⊖ has no two-valued ring image")
    ops = {Union: t.Or, Inter: t.And, Diff: t.Minus}
    return ops[type(e)](set_to_expr(e.left, pair, memo), set_to_expr(e.right, pair, memo))


def sempair_to_terms(pair: AtomizedPair) -> tuple[tuple[t.Expr, t.Expr], tuple[t.Expr, t.Expr]]:
    """((permit1, deny1), (permit2, deny2)) as tuple-level algebra terms."""
    memo: dict = {}

    def conv(sp: SemPair):
        return set_to_expr(sp.accept, pair, memo), set_to_expr(sp.deny, pair, memo)
    return conv(pair.p1), conv(pair.p2)
