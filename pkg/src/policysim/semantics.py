"""SePL semantics.

* ``expand_abbreviations`` removes φ→p / φ→d and φ:P forms.
* ``absolute_semantics`` maps a term to a symbolic pair (accept, deny) of
  set expressions over constraint tuples.
* ``eval_request`` is the compositional three-valued evaluator for one request.
* ``member`` evaluates a set expression at one request; applied to both parts
  of a ``SemPair`` it gives a second route to the relative semantics.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

from .errors import ScopeOnUnsupportedOperator, SchemaMismatch
from .model import (
    UNKNOWN, Assert, AttributeSchema, Binary, Choice, ConstraintTuple, Decision,
    DenyAll, DenyOv, Effect, Empty, Minus, Neg, OMinus, Par, PermitAll, PermitOv,
    PolicyTerm, Request, Rule, Scoped, Seq, TriBool, tuple_complement,
)


# ---------------------------------------------------------------------------
# abbreviations


def expand_abbreviations(term: PolicyTerm) -> PolicyTerm:
    if isinstance(term, Effect):
        bottom = term.target.schema.bottom()
        return Rule(term.target, bottom) if term.permit else Rule(bottom, term.target)
    if isinstance(term, Scoped):
        return _scope(term.scope, expand_abbreviations(term.body))
    if isinstance(term, (Neg, Assert)):
        return type(term)(expand_abbreviations(term.body))
    if isinstance(term, Binary):
        return type(term)(expand_abbreviations(term.left), expand_abbreviations(term.right))
    return term


_SCOPE_DISTRIBUTES = (Par, Choice, OMinus, Seq, PermitOv, DenyOv)


def _scope(phi: ConstraintTuple, term: PolicyTerm) -> PolicyTerm:
    """φ:P for an abbreviation-free P."""
    if isinstance(term, Rule):
        return Rule(phi & term.accept, phi & term.deny)
    if isinstance(term, Empty):
        return term
    if isinstance(term, PermitAll):
        return Rule(phi, phi.schema.bottom())
    if isinstance(term, DenyAll):
        return Rule(phi.schema.bottom(), phi)
    if isinstance(term, Neg):
        return Neg(_scope(tuple_complement(phi), term.body))
    if isinstance(term, Assert):
        return Assert(_scope(phi, term.body))
    if isinstance(term, _SCOPE_DISTRIBUTES):
        return type(term)(_scope(phi, term.left), _scope(phi, term.right))
    if isinstance(term, Minus):
        raise ScopeOnUnsupportedOperator("φ:P is not defined over the − operator")
    raise TypeError(f"not a policy term: {term!r}")


# ---------------------------------------------------------------------------
# set expressions


class SetExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Box(SetExpr):
    tup: ConstraintTuple


@dataclass(frozen=True)
class Bottom(SetExpr):
    arity: int


@dataclass(frozen=True)
class Top(SetExpr):
    arity: int


@dataclass(frozen=True)
class Compl(SetExpr):
    body: SetExpr


@dataclass(frozen=True)
class CornerL(SetExpr):
    """⌐α: an indeterminate α becomes ∅."""

    body: SetExpr


@dataclass(frozen=True)
class CornerR(SetExpr):
    """α⌝: an indeterminate α becomes the full domain."""

    body: SetExpr


@dataclass(frozen=True)
class SetOp(SetExpr):
    left: SetExpr
    right: SetExpr
    symbol: ClassVar[str] = "?"


@dataclass(frozen=True)
class Union(SetOp):
    symbol: ClassVar[str] = "∪"


@dataclass(frozen=True)
class Inter(SetOp):
    symbol: ClassVar[str] = "∩"


@dataclass(frozen=True)
class Diff(SetOp):
    symbol: ClassVar[str] = "−"


@dataclass(frozen=True)
class OMinusSet(SetOp):
    symbol: ClassVar[str] = "⊖"


@dataclass(frozen=True)
class SemPair:
    accept: SetExpr
    deny: SetExpr


def leaves(e: SetExpr):
    """Yield every Box leaf of a set expression, visiting shared nodes once."""
    seen, stack = set(), [e]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        if isinstance(x, Box):
            yield x
        elif isinstance(x, SetOp):
            stack += (x.right, x.left)
        elif isinstance(x, (Compl, CornerL, CornerR)):
            stack.append(x.body)


def _leaf(phi: ConstraintTuple) -> SetExpr:
    if phi.is_bottom:
        return Bottom(phi.schema.arity)
    if phi.is_top:
        return Top(phi.schema.arity)
    return Box(phi)


def _rule_part(keep: ConstraintTuple, drop: ConstraintTuple) -> SetExpr:
    # φ − ⊥ = φ and ⊥ − φ = ⊥ are applied here so rule semantics read as in
    # the worked examples; every other difference stays symbolic
    if drop.is_bottom or keep.is_bottom:
        return _leaf(keep)
    return Diff(_leaf(keep), _leaf(drop))


def absolute_semantics(term: PolicyTerm, schema: AttributeSchema) -> SemPair:
    n = schema.arity

    def go(t: PolicyTerm) -> SemPair:
        if isinstance(t, Rule):
            if t.accept.schema != schema or t.deny.schema != schema:
                raise SchemaMismatch("rule built over a different schema")
            return SemPair(_rule_part(t.accept, t.deny), _rule_part(t.deny, t.accept))
        if isinstance(t, Empty):
            return SemPair(Bottom(n), Bottom(n))
        if isinstance(t, DenyAll):
            return SemPair(Bottom(n), Top(n))
        if isinstance(t, PermitAll):
            return SemPair(Top(n), Bottom(n))
        if isinstance(t, Neg):
            s = go(t.body)
            return SemPair(s.deny, s.accept)
        if isinstance(t, Assert):
            s = go(t.body)
            return SemPair(CornerL(s.accept), CornerL(s.deny))
        if isinstance(t, (Effect, Scoped)):
            return go(expand_abbreviations(t))
        if not isinstance(t, Binary):
            raise TypeError(f"not a policy term: {t!r}")
        s1, s2 = go(t.left), go(t.right)
        a1, d1, a2, d2 = s1.accept, s1.deny, s2.accept, s2.deny
        if isinstance(t, Seq):
            return SemPair(Union(a1, Diff(a2, d1)), Union(d1, Diff(d2, a1)))
        if isinstance(t, PermitOv):
            return SemPair(Union(a1, a2), Union(Diff(d1, a2), Diff(d2, a1)))
        if isinstance(t, DenyOv):
            return SemPair(Union(Diff(a1, d2), Diff(a2, d1)), Union(d1, d2))
        if isinstance(t, Par):
            return SemPair(Inter(a1, a2), Inter(d1, d2))
        if isinstance(t, Choice):
            return SemPair(Diff(Union(a1, a2), Union(d1, d2)), Diff(Union(d1, d2), Union(a1, a2)))
        if isinstance(t, Minus):
            return SemPair(Diff(a1, Union(a2, d2)), Diff(d1, Union(a2, d2)))
        if isinstance(t, OMinus):
            return SemPair(OMinusSet(a1, Union(a2, d2)), OMinusSet(d1, Union(a2, d2)))
        raise TypeError(f"unknown operator {t!r}")

    return go(term)


def show_set(e: SetExpr, names=None) -> str:
    from .model import show_tuple

    if isinstance(e, Box):
        return show_tuple(e.tup, names)
    if isinstance(e, Bottom):
        return "⊥"
    if isinstance(e, Top):
        return "⊤"
    if isinstance(e, Compl):
        return f"¬{show_set(e.body, names)}"
    if isinstance(e, CornerL):
        return f"⌐{show_set(e.body, names)}"
    if isinstance(e, CornerR):
        return f"{show_set(e.body, names)}⌝"
    return f"({show_set(e.left, names)} {e.symbol} {show_set(e.right, names)})"


# ---------------------------------------------------------------------------
# relative semantics


def eval_component(values: frozenset, domain: frozenset, v: str) -> TriBool:
    if values == domain:
        return TriBool.T
    if not values:
        return TriBool.F
    if v == UNKNOWN:
        return TriBool.U
    return TriBool.of(v in values)


def eval_tuple(phi: ConstraintTuple, req: Request) -> TriBool:
    out = TriBool.T
    bound = req.as_dict()
    for comp, (name, domain) in zip(phi.components, phi.schema.slots):
        out = out & eval_component(comp, domain, bound[name])
    return out


def eval_request(term: PolicyTerm, req: Request) -> Decision:
    """⟦P⟧_Γ by structural recursion over the term."""
    T, F = TriBool.T, TriBool.F

    def go(t: PolicyTerm) -> tuple[TriBool, TriBool]:
        if isinstance(t, Rule):
            p1, p2 = eval_tuple(t.accept, req), eval_tuple(t.deny, req)
            return p1.minus(p2), p2.minus(p1)
        if isinstance(t, Empty):
            return F, F
        if isinstance(t, DenyAll):
            return F, T
        if isinstance(t, PermitAll):
            return T, F
        if isinstance(t, Neg):
            a, d = go(t.body)
            return d, a
        if isinstance(t, Assert):
            a, d = go(t.body)
            return a.corner(), d.corner()
        if isinstance(t, (Effect, Scoped)):
            return go(expand_abbreviations(t))
        a1, d1 = go(t.left)
        a2, d2 = go(t.right)
        if isinstance(t, Seq):
            return a1 | a2.minus(d1), d1 | d2.minus(a1)
        if isinstance(t, PermitOv):
            return a1 | a2, d1.minus(a2) | d2.minus(a1)
        if isinstance(t, DenyOv):
            return a1.minus(d2) | a2.minus(d1), d1 | d2
        if isinstance(t, Par):
            return a1 & a2, d1 & d2
        if isinstance(t, Choice):
            return (a1 | a2).minus(d1 | d2), (d1 | d2).minus(a1 | a2)
        if isinstance(t, Minus):
            return a1.minus(a2 | d2), d1.minus(a2 | d2)
        if isinstance(t, OMinus):
            return a1.ominus(a2 | d2), d1.ominus(a2 | d2)
        raise TypeError(f"not a policy term: {t!r}")

    return Decision(*go(term))


def member(e: SetExpr, req: Request, _memo=None) -> TriBool:
    """Three-valued membership of one request in a set expression."""
    memo = {} if _memo is None else _memo
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Box):
        out = eval_tuple(e.tup, req)
    elif isinstance(e, Bottom):
        out = TriBool.F
    elif isinstance(e, Top):
        out = TriBool.T
    elif isinstance(e, Compl):
        out = ~member(e.body, req, memo)
    elif isinstance(e, CornerL):
        out = member(e.body, req, memo).corner()
    elif isinstance(e, CornerR):
        out = member(e.body, req, memo).corner_right()
    elif isinstance(e, SetOp):
        x, y = member(e.left, req, memo), member(e.right, req, memo)
        if isinstance(e, Union):
            out = x | y
        elif isinstance(e, Inter):
            out = x & y
        elif isinstance(e, Diff):
            out = x.minus(y)
        else:
            out = x.ominus(y)
    else:
        raise TypeError(f"not a set expression: {e!r}")
    memo[key] = out
    return out


def eval_sempair(pair: SemPair, req: Request) -> Decision:
    return Decision(member(pair.accept, req), member(pair.deny, req))


def has_ominus(e: SetExpr, _memo=None) -> bool:
    memo = {} if _memo is None else _memo
    key = id(e)
    if key not in memo:
        if isinstance(e, OMinusSet):
            memo[key] = True
        elif isinstance(e, SetOp):
            memo[key] = has_ominus(e.left, memo) or has_ominus(e.right, memo)
        elif isinstance(e, (Compl, CornerL, CornerR)):
            memo[key] = has_ominus(e.body, memo)
        else:
            memo[key] = False
    return memo[key]
