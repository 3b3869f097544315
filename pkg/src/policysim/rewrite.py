"""The boolean-ring rewrite system R0–R13, T0–T9 with derivation traces.

Terms are kept modulo AC of ⊕ and ∗ by the flattened, sorted
representation in ``policysim.terms``. The strategy is innermost: a step
picks the highest-priority rule that applies at some innermost redex and
applies it at every innermost redex where it applies. Tuple components are
therefore in normal form (and T8 has fired) before a tuple operator is
distributed over them, which is what makes the result agree with
``ring.algebra_to_ring``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ArityMismatch
from . import terms as t
from .terms import ONE, ZERO, Expr, mul, xor

RuleFn = Callable[[Expr, bool], Optional[Expr]]


def _scalar(*es: Expr) -> bool:
    return not any(t.is_tuple_sorted(e) for e in es)


def _binary_rule(cls, build) -> RuleFn:
    def rule(e: Expr, root: bool):
        if type(e) is cls and _scalar(e.left, e.right):
            return build(e.left, e.right)
        return None
    return rule


def _tuple_rule(cls) -> RuleFn:
    def rule(e: Expr, root: bool):
        if type(e) is cls and isinstance(e.left, t.Tup) and isinstance(e.right, t.Tup):
            xs, ys = e.left.items, e.right.items
            if len(xs) != len(ys):
                raise ArityMismatch(f"tuples of arity {len(xs)} and {len(ys)}")
            return t.Tup(tuple(cls(x, y) for x, y in zip(xs, ys)))
        return None
    return rule


def r0(e, root):
    return ZERO if e == t.FALSE else None


def r1(e, root):
    return ONE if e == t.TRUE else None


def r7(e, root):
    if isinstance(e, t.Not) and _scalar(e.body):
        return xor(e.body, ONE)
    return None


def r8(e, root):
    if isinstance(e, t.Xor) and ZERO in e.args:
        rest = [a for a in e.args if a != ZERO]
        return xor(*rest) if rest else ZERO
    return None


def r9(e, root):
    if isinstance(e, t.Xor):
        counts = Counter(e.args)
        if any(c >= 2 for a, c in counts.items() if a != ZERO):
            rest = []
            for a, c in counts.items():
                keep = c % 2 if a != ZERO else c
                rest.extend([a] * keep)
            return xor(*rest, ZERO) if rest else ZERO
    return None


def r10(e, root):
    if isinstance(e, t.Mul) and ONE in e.args:
        rest = [a for a in e.args if a != ONE]
        return mul(*rest) if rest else ONE
    return None


def r11(e, root):
    if isinstance(e, t.Mul) and len(set(e.args)) < len(e.args):
        return mul(*dict.fromkeys(e.args))
    return None


def r12(e, root):
    if isinstance(e, t.Mul) and ZERO in e.args:
        return ZERO
    return None


def r13(e, root):
    if isinstance(e, t.Mul):
        for i, a in enumerate(e.args):
            if isinstance(a, t.Xor):
                others = e.args[:i] + e.args[i + 1:]
                return xor(*(mul(*others, y) for y in a.args))
    return None


def t0(e, root):
    return t.Tup((t.FALSE,) * e.n) if isinstance(e, t.FTup) else None


def t1(e, root):
    return t.Tup((t.TRUE,) * e.n) if isinstance(e, t.TTup) else None


def t7(e, root):
    if isinstance(e, t.Not) and isinstance(e.body, t.Tup):
        return t.Tup(tuple(t.Not(x) for x in e.body.items))
    return None


def t8(e, root):
    if isinstance(e, t.Tup) and ZERO in e.items:
        if root:
            return ZERO
        if any(x != ZERO for x in e.items):
            return t.Tup((ZERO,) * len(e.items))
    return None


def t9(e, root):
    if root and isinstance(e, t.Tup) and e.items and all(x == ONE for x in e.items):
        return ONE
    return None


RULES: dict[str, RuleFn] = {
    "R0": r0,
    "R1": r1,
    "R2": _binary_rule(t.Minus, lambda x, y: xor(x, mul(x, y))),
    "R3": _binary_rule(t.Or, lambda x, y: xor(mul(x, y), x, y)),
    "R4": _binary_rule(t.And, lambda x, y: mul(x, y)),
    "R5": _binary_rule(t.Implies, lambda x, y: xor(mul(x, y), x, ONE)),
    "R6": _binary_rule(t.Equiv, lambda x, y: xor(x, y, ONE)),
    "R7": r7,
    "R8": r8,
    "R9": r9,
    "R10": r10,
    "R11": r11,
    "R12": r12,
    "R13": r13,
    "T0": t0,
    "T1": t1,
    "T2": _tuple_rule(t.Minus),
    "T3": _tuple_rule(t.Or),
    "T4": _tuple_rule(t.And),
    "T5": _tuple_rule(t.Implies),
    "T6": _tuple_rule(t.Equiv),
    "T7": t7,
    "T8": t8,
    "T9": t9,
}

PRIORITY = (
    "T0", "R0", "T1", "R1", "R12", "R10", "R11", "R8", "R9", "R13", "T8", "T9",
    "T2", "T3", "T4", "T5", "T6", "T7", "R2", "R3", "R4", "R5", "R6", "R7",
)


@dataclass(frozen=True)
class Step:
    rule: str
    before: Expr
    after: Expr


@dataclass
class DerivationTrace:
    start: Expr
    steps: list[Step] = field(default_factory=list)

    @property
    def result(self) -> Expr:
        return self.steps[-1].after if self.steps else self.start

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def lines(self, rename=None) -> list[str]:
        out = [t.show(self.start, rename)]
        out += [f"-> {t.show(s.after, rename)} ; by {s.rule}" for s in self.steps]
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _applicable(e: Expr, root: bool) -> list[str]:
    return [rid for rid in PRIORITY if RULES[rid](e, root) is not None]


def _innermost(e: Expr, root: bool = True) -> tuple[bool, set[str]]:
    """(subtree has a redex, rules applicable at innermost redexes within)."""
    found, rules = False, set()
    for c in t.children(e):
        f, r = _innermost(c, False)
        found |= f
        rules |= r
    if found:
        return True, rules
    here = _applicable(e, root)
    return (True, set(here)) if here else (False, set())


def apply_rule(e: Expr, rule_id: str, root: bool = True) -> Expr:
    """Apply `rule_id` at every innermost redex where it applies."""
    kids = t.children(e)
    if kids:
        below = [_innermost(c, False)[0] for c in kids]
        if any(below):
            new = tuple(apply_rule(c, rule_id, False) if b else c for c, b in zip(kids, below))
            return t.rebuild(e, new)
    out = RULES[rule_id](e, root)
    return e if out is None else out


def step(e: Expr) -> Optional[tuple[str, Expr]]:
    found, rules = _innermost(e)
    if not found:
        return None
    rule_id = next(rid for rid in PRIORITY if rid in rules)
    return rule_id, apply_rule(e, rule_id)


def rewrite(e: Expr, max_steps: int = 100_000) -> tuple[Expr, DerivationTrace]:
    """Rewrite to normal form, recording every step."""
    tr = DerivationTrace(e)
    cur = e
    for _ in range(max_steps):
        nxt = step(cur)
        if nxt is None:
            break
        rule_id, new = nxt
        tr.steps.append(Step(rule_id, cur, new))
        cur = new
    else:
        raise RuntimeError("rewriting did not terminate within the step budget")
    if not is_normal_form(cur):
        raise ArityMismatch(f"stuck term, mixed scalar/tuple operands: {t.show(cur)}")
    return cur, tr


def replay(tr: DerivationTrace) -> bool:
    """Re-apply each recorded rule from the start term and compare."""
    cur = tr.start
    for s in tr.steps:
        if s.before != cur:
            return False
        cur = apply_rule(cur, s.rule)
        if cur != s.after:
            return False
    return True


def is_normal_form(e: Expr) -> bool:
    if isinstance(e, t.Tup):
        return all(_is_poly(c) for c in e.items)
    return _is_poly(e)


def _is_monomial(e: Expr) -> bool:
    if e == ONE or isinstance(e, t.Var):
        return True
    return isinstance(e, t.Mul) and all(isinstance(a, t.Var) for a in e.args)


def _is_poly(e: Expr) -> bool:
    if e == ZERO or _is_monomial(e):
        return True
    return isinstance(e, t.Xor) and all(_is_monomial(a) for a in e.args)


def to_ring(e: Expr):
    """Convert a rewrite normal form to RingPoly / TupleTerm."""
    from .ring import ONE as P1, ZERO as P0, RingPoly, TupleTerm

    def poly(x: Expr) -> RingPoly:
        if x == ZERO:
            return P0
        if x == ONE:
            return P1
        if isinstance(x, t.Var):
            return RingPoly.var(x.name)
        if isinstance(x, t.Mul):
            return RingPoly([frozenset(a.name for a in x.args)])
        if isinstance(x, t.Xor):
            out = P0
            for a in x.args:
                out = out ^ poly(a)
            return out
        raise ValueError(f"not a normal form: {t.show(x)}")

    if isinstance(e, t.Tup):
        return TupleTerm(tuple(poly(c) for c in e.items))
    return poly(e)
