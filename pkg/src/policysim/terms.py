"""Boolean algebra and boolean ring terms over atoms.

One term language covers both sides of the translation: algebra
connectives (∨ ∧ ¬ − ⇒ ≈, constants T/F), ring operators (⊕ ∗, constants
0/1) and fixed-arity tuples with the F_n / T_n shorthands.

⊕ and ∗ are n-ary with flattened, sorted arguments, so terms are kept
modulo associativity and commutativity of both operators.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import ClassVar, Mapping


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    symbol: str  # "T", "F", "0" or "1"

    @property
    def truth(self) -> bool:
        return self.symbol in ("T", "1")


TRUE, FALSE, ONE, ZERO = Const("T"), Const("F"), Const("1"), Const("0")


@dataclass(frozen=True)
class Not(Expr):
    body: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr
    symbol: ClassVar[str] = "?"


@dataclass(frozen=True)
class Or(BinOp):
    symbol: ClassVar[str] = "∨"


@dataclass(frozen=True)
class And(BinOp):
    symbol: ClassVar[str] = "∧"


@dataclass(frozen=True)
class Minus(BinOp):
    symbol: ClassVar[str] = "−"


@dataclass(frozen=True)
class Implies(BinOp):
    symbol: ClassVar[str] = "⇒"


@dataclass(frozen=True)
class Equiv(BinOp):
    symbol: ClassVar[str] = "≈"


@dataclass(frozen=True)
class Xor(Expr):
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Tup(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class FTup(Expr):
    n: int


@dataclass(frozen=True)
class TTup(Expr):
    n: int


_RANK = {Const: 0, Var: 1, Mul: 2, Xor: 3, Not: 4, Tup: 5, FTup: 6, TTup: 7}


def sort_key(e: Expr):
    return (_RANK.get(type(e), 8), show(e))


def _flat(cls, args):
    out = []
    for a in args:
        if isinstance(a, cls):
            out.extend(a.args)
        else:
            out.append(a)
    return out


def xor(*args: Expr) -> Expr:
    """x1 ⊕ ... ⊕ xn, flattened and sorted; no simplification."""
    flat = sorted(_flat(Xor, args), key=sort_key)
    if not flat:
        return ZERO
    return flat[0] if len(flat) == 1 else Xor(tuple(flat))


def mul(*args: Expr) -> Expr:
    """x1 ∗ ... ∗ xn, flattened and sorted; no simplification."""
    flat = sorted(_flat(Mul, args), key=sort_key)
    if not flat:
        return ONE
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


def disjunction(items) -> Expr:
    items = list(items)
    if not items:
        return FALSE
    out = items[0]
    for x in items[1:]:
        out = Or(out, x)
    return out


def is_tuple_sorted(e: Expr) -> bool:
    if isinstance(e, (Tup, FTup, TTup)):
        return True
    if isinstance(e, BinOp):
        return is_tuple_sorted(e.left) or is_tuple_sorted(e.right)
    if isinstance(e, Not):
        return is_tuple_sorted(e.body)
    return False


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, BinOp):
        return (e.left, e.right)
    if isinstance(e, Not):
        return (e.body,)
    if isinstance(e, (Xor, Mul)):
        return e.args
    if isinstance(e, Tup):
        return e.items
    return ()


def rebuild(e: Expr, kids: tuple[Expr, ...]) -> Expr:
    if isinstance(e, BinOp):
        return type(e)(*kids)
    if isinstance(e, Not):
        return Not(kids[0])
    if isinstance(e, Xor):
        return xor(*kids)
    if isinstance(e, Mul):
        return mul(*kids)
    if isinstance(e, Tup):
        return Tup(tuple(kids))
    return e


def variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    out = set()
    for c in children(e):
        out |= variables(c)
    return out


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in children(e))


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Expr, env: Mapping[str, bool]):
    """Two-valued value of `e`: a bool, or a tuple of bools for tuple terms.

    Tuple operators act componentwise; a scalar constant next to a tuple is
    broadcast.
    """
    if isinstance(e, Var):
        return bool(env[e.name])
    if isinstance(e, Const):
        return e.truth
    if isinstance(e, FTup):
        return (False,) * e.n
    if isinstance(e, TTup):
        return (True,) * e.n
    if isinstance(e, Tup):
        return tuple(evaluate(c, env) for c in e.items)
    if isinstance(e, Not):
        v = evaluate(e.body, env)
        return tuple(not x for x in v) if isinstance(v, tuple) else not v
    if isinstance(e, Xor):
        out = False
        for a in e.args:
            out ^= evaluate(a, env)
        return out
    if isinstance(e, Mul):
        return all(evaluate(a, env) for a in e.args)
    a, b = evaluate(e.left, env), evaluate(e.right, env)
    op = _BOOL_OPS[type(e)]
    if isinstance(a, tuple) or isinstance(b, tuple):
        n = len(a) if isinstance(a, tuple) else len(b)
        a = a if isinstance(a, tuple) else (a,) * n
        b = b if isinstance(b, tuple) else (b,) * n
        return tuple(op(x, y) for x, y in zip(a, b))
    return op(a, b)


_BOOL_OPS = {
    Or: lambda a, b: a or b,
    And: lambda a, b: a and b,
    Minus: lambda a, b: a and not b,
    Implies: lambda a, b: (not a) or b,
    Equiv: lambda a, b: a == b,
}


def truth_table(e: Expr, names=None) -> tuple:
    names = sorted(variables(e)) if names is None else list(names)
    return tuple(evaluate(e, dict(zip(names, bits)))
                 for bits in product((False, True), repeat=len(names)))


# ---------------------------------------------------------------------------
# printing


def show(e: Expr, rename: Mapping[str, str] | None = None) -> str:
    """Infix rendering; ⊕ prints as "+", ∗ as "*", F_n as "F3"."""
    def name(v: str) -> str:
        return rename.get(v, v) if rename else v

    def go(x: Expr, nested: bool) -> str:
        if isinstance(x, Var):
            return name(x.name)
        if isinstance(x, Const):
            return x.symbol
        if isinstance(x, FTup):
            return f"F{x.n}"
        if isinstance(x, TTup):
            return f"T{x.n}"
        if isinstance(x, Tup):
            return "(" + ", ".join(go(c, False) for c in x.items) + ")"
        if isinstance(x, Not):
            return "¬" + go(x.body, True)
        if isinstance(x, Mul):
            s = "*".join(go(a, True) for a in x.args)
            return s
        if isinstance(x, Xor):
            s = " + ".join(go(a, isinstance(a, Xor)) for a in x.args)
        else:
            s = f"{go(x.left, True)} {x.symbol} {go(x.right, True)}"
        return f"({s})" if nested else s

    return go(e, False)
