"""Shared domain types: attribute schemas, constraint tuples, SePL policy
terms, three-valued booleans and decisions.

Everything here is an immutable value.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import ClassVar, Iterable, Mapping

from .errors import InternalInconsistency, SchemaMismatch, UnboundAttribute

OTHER = "⟨other⟩"
UNKNOWN = "?"


# ---------------------------------------------------------------------------
# schema and constraint tuples


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute slots, each with a finite value domain."""

    slots: tuple[tuple[str, frozenset], ...]

    def __post_init__(self):
        names = [name for name, _ in self.slots]
        if len(set(names)) != len(names):
            raise SchemaMismatch(f"duplicate attribute names in {names}")
        for name, domain in self.slots:
            if not domain:
                raise SchemaMismatch(f"empty domain for attribute {name!r}")

    @classmethod
    def from_values(cls, values: Mapping[str, Iterable[str]]) -> "AttributeSchema":
        """Build a schema from mentioned values; every domain gets the residual value."""
        return cls(tuple((name, frozenset(vals) | {OTHER}) for name, vals in values.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.slots)

    @property
    def arity(self) -> int:
        return len(self.slots)

    def index(self, name: str) -> int:
        for i, (slot, _) in enumerate(self.slots):
            if slot == name:
                return i
        raise UnboundAttribute(f"attribute {name!r} is not in the schema")

    def domain(self, key) -> frozenset:
        if isinstance(key, str):
            key = self.index(key)
        return self.slots[key][1]

    def top(self) -> "ConstraintTuple":
        return ConstraintTuple(self, tuple(d for _, d in self.slots))

    def bottom(self) -> "ConstraintTuple":
        return ConstraintTuple(self, tuple(frozenset() for _ in self.slots))

    def restrict(self, **restrictions: Iterable[str]) -> "ConstraintTuple":
        return self.tuple_of(restrictions)

    def tuple_of(self, restrictions: Mapping[str, Iterable[str]]) -> "ConstraintTuple":
        """(a1∈d1, ...) with unlisted attributes unrestricted."""
        comps = [d for _, d in self.slots]
        for name, vals in restrictions.items():
            comps[self.index(name)] = frozenset(vals)
        return ConstraintTuple(self, tuple(comps))


@dataclass(frozen=True)
class ConstraintTuple:
    """φ = (d1, ..., dn): one value-set per schema slot.

    ⊤ is the full domain and ⊥ the empty set; both are stored as plain sets.
    """

    schema: AttributeSchema
    components: tuple[frozenset, ...]

    def __post_init__(self):
        if len(self.components) != self.schema.arity:
            raise SchemaMismatch(
                f"tuple has {len(self.components)} components, schema has {self.schema.arity}")
        for comp, (name, domain) in zip(self.components, self.schema.slots):
            if not comp <= domain:
                raise SchemaMismatch(f"values {sorted(comp - domain)} outside domain of {name!r}")

    @property
    def is_bottom(self) -> bool:
        return all(not c for c in self.components)

    @property
    def is_top(self) -> bool:
        return all(c == d for c, (_, d) in zip(self.components, self.schema.slots))

    def restricted(self) -> list[tuple[str, frozenset]]:
        """Attributes whose component differs from the full domain."""
        return [(name, c) for c, (name, d) in zip(self.components, self.schema.slots) if c != d]

    def _check(self, other: "ConstraintTuple"):
        if other.schema != self.schema:
            raise SchemaMismatch("constraint tuples built over different schemas")

    def union(self, other: "ConstraintTuple") -> "ConstraintTuple":
        self._check(other)
        return ConstraintTuple(self.schema, tuple(a | b for a, b in zip(self.components, other.components)))

    def intersection(self, other: "ConstraintTuple") -> "ConstraintTuple":
        self._check(other)
        return ConstraintTuple(self.schema, tuple(a & b for a, b in zip(self.components, other.components)))

    __or__ = union
    __and__ = intersection

    def complement(self) -> "ConstraintTuple":
        return tuple_complement(self)

    def contains(self, point: Mapping[str, str]) -> bool:
        """Pointwise membership of a fully bound, unknown-free request."""
        return all(point[name] in c for c, (name, _) in zip(self.components, self.schema.slots))


def tuple_complement(phi: ConstraintTuple) -> ConstraintTuple:
    """Componentwise complement within each slot domain; ⊤ slots become ∅."""
    return ConstraintTuple(
        phi.schema, tuple(d - c for c, (_, d) in zip(phi.components, phi.schema.slots)))


# ---------------------------------------------------------------------------
# three-valued logic and decisions


class TriBool(enum.Enum):
    F = 0
    U = 1
    T = 2

    def __and__(self, other: "TriBool") -> "TriBool":
        return TriBool(min(self.value, other.value))

    def __or__(self, other: "TriBool") -> "TriBool":
        return TriBool(max(self.value, other.value))

    def __invert__(self) -> "TriBool":
        return TriBool(2 - self.value)

    def minus(self, other: "TriBool") -> "TriBool":
        return self & ~other

    def ominus(self, other: "TriBool") -> "TriBool":
        if self is TriBool.T:
            return TriBool.T if other is TriBool.F else TriBool.U
        return self

    def corner(self) -> "TriBool":
        """⌐b: the unknown value becomes F."""
        return TriBool.F if self is TriBool.U else self

    def corner_right(self) -> "TriBool":
        """b⌝: the unknown value becomes T."""
        return TriBool.T if self is TriBool.U else self

    @classmethod
    def of(cls, b: bool) -> "TriBool":
        return cls.T if b else cls.F

    def __str__(self):
        return "?" if self is TriBool.U else self.name


class Verdict(enum.Enum):
    PERMIT = "Permit"
    DENY = "Deny"
    NOT_APPLICABLE = "NotApplicable"
    INDETERMINATE_P = "Indeterminate(P)"
    INDETERMINATE_D = "Indeterminate(D)"
    INDETERMINATE_PD = "Indeterminate(PD)"

    @property
    def indeterminate(self) -> bool:
        return self.name.startswith("INDETERMINATE")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Decision:
    permit: TriBool
    deny: TriBool

    def __str__(self):
        return f"({self.permit},{self.deny})"


def classify_decision(d: Decision) -> Verdict:
    T, U, F = TriBool.T, TriBool.U, TriBool.F
    if d.permit is T and d.deny is T:
        raise InternalInconsistency(f"decision {d} both permits and denies")
    if d.permit is T:
        return Verdict.PERMIT
    if d.deny is T:
        return Verdict.DENY
    return {
        (F, F): Verdict.NOT_APPLICABLE,
        (U, F): Verdict.INDETERMINATE_P,
        (F, U): Verdict.INDETERMINATE_D,
        (U, U): Verdict.INDETERMINATE_PD,
    }[d.permit, d.deny]


@dataclass(frozen=True)
class Request:
    """Γ = [a1=v1, ..., an=vn]; a value of "?" means unknown."""

    schema: AttributeSchema
    bindings: tuple[tuple[str, str], ...]

    def __post_init__(self):
        bound = dict(self.bindings)
        for name in self.schema.names:
            if name not in bound:
                raise UnboundAttribute(f"request does not bind {name!r}")
            v = bound[name]
            if v != UNKNOWN and v not in self.schema.domain(name):
                raise SchemaMismatch(f"value {v!r} outside domain of {name!r}")

    @classmethod
    def of(cls, schema: AttributeSchema, values: Mapping[str, str], strict: bool = False) -> "Request":
        """Bind every schema attribute. Values outside a domain map to the
        residual value; missing attributes read as unknown unless `strict`."""
        out = []
        for name in schema.names:
            if name not in values:
                if strict:
                    raise UnboundAttribute(f"request does not bind {name!r}")
                out.append((name, UNKNOWN))
                continue
            v = values[name]
            if v != UNKNOWN and v not in schema.domain(name):
                v = OTHER
            out.append((name, v))
        return cls(schema, tuple(out))

    def __getitem__(self, name: str) -> str:
        return dict(self.bindings)[name]

    def as_dict(self) -> dict[str, str]:
        return dict(self.bindings)


# ---------------------------------------------------------------------------
# SePL terms


class PolicyTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(PolicyTerm):
    symbol: ClassVar[str] = "ε"


@dataclass(frozen=True)
class DenyAll(PolicyTerm):
    symbol: ClassVar[str] = "0"


@dataclass(frozen=True)
class PermitAll(PolicyTerm):
    symbol: ClassVar[str] = "1"


@dataclass(frozen=True)
class Rule(PolicyTerm):
    """<φ1, φ2>: accept φ1 not denied by φ2, deny φ2 not accepted by φ1."""

    accept: ConstraintTuple
    deny: ConstraintTuple


@dataclass(frozen=True)
class Effect(PolicyTerm):
    """φ→p (permit=True) or φ→d; removed by expand_abbreviations."""

    target: ConstraintTuple
    permit: bool


@dataclass(frozen=True)
class Neg(PolicyTerm):
    body: PolicyTerm
    symbol: ClassVar[str] = "¬"


@dataclass(frozen=True)
class Assert(PolicyTerm):
    """⌐P: indeterminate parts become not-applicable."""

    body: PolicyTerm
    symbol: ClassVar[str] = "⌐"


@dataclass(frozen=True)
class Scoped(PolicyTerm):
    """φ:P; removed by expand_abbreviations."""

    scope: ConstraintTuple
    body: PolicyTerm


@dataclass(frozen=True)
class Binary(PolicyTerm):
    left: PolicyTerm
    right: PolicyTerm
    symbol: ClassVar[str] = "?"


@dataclass(frozen=True)
class Seq(Binary):
    symbol: ClassVar[str] = "."


@dataclass(frozen=True)
class PermitOv(Binary):
    symbol: ClassVar[str] = "⌊⌊"


@dataclass(frozen=True)
class DenyOv(Binary):
    symbol: ClassVar[str] = "⌋⌋"


@dataclass(frozen=True)
class Par(Binary):
    symbol: ClassVar[str] = "∥"


@dataclass(frozen=True)
class Choice(Binary):
    symbol: ClassVar[str] = "+"


@dataclass(frozen=True)
class Minus(Binary):
    symbol: ClassVar[str] = "−"


@dataclass(frozen=True)
class OMinus(Binary):
    symbol: ClassVar[str] = "⊖"


BINARY_OPERATORS = (Seq, PermitOv, DenyOv, Par, Choice, Minus, OMinus)


def chain(op: type[Binary], terms: Iterable[PolicyTerm]) -> PolicyTerm:
    """Left-nested op(P1, ..., Pn)."""
    terms = list(terms)
    if not terms:
        raise ValueError("cannot chain an empty list of terms")
    out = terms[0]
    for t in terms[1:]:
        out = op(out, t)
    return out


def contains_ominus(term: PolicyTerm) -> bool:
    if isinstance(term, OMinus):
        return True
    if isinstance(term, Binary):
        return contains_ominus(term.left) or contains_ominus(term.right)
    if isinstance(term, (Neg, Assert, Scoped)):
        return contains_ominus(term.body)
    return False


# ---------------------------------------------------------------------------
# printing


Names = Mapping[tuple[str, frozenset], str]


def show_values(name: str, values: frozenset, names: Names | None = None) -> str:
    if names and (name, values) in names:
        return names[name, values]
    if len(values) == 1:
        return f"{name}={next(iter(values))}"
    return f"{name}∈{{{','.join(sorted(values))}}}"


def show_tuple(phi: ConstraintTuple, names: Names | None = None) -> str:
    if phi.is_bottom:
        return "⊥"
    return "(" + ",".join(show_values(n, v, names) for n, v in phi.restricted()) + ")"


def show_term(term: PolicyTerm, names: Names | None = None) -> str:
    """Compact SePL notation, e.g. ((⊥,(x,y,z)).((x),⊥))."""
    def go(t: PolicyTerm) -> str:
        if isinstance(t, (Empty, DenyAll, PermitAll)):
            return t.symbol
        if isinstance(t, Rule):
            return f"({show_tuple(t.accept, names)},{show_tuple(t.deny, names)})"
        if isinstance(t, Effect):
            return f"{show_tuple(t.target, names)}→{'p' if t.permit else 'd'}"
        if isinstance(t, (Neg, Assert)):
            return t.symbol + go(t.body)
        if isinstance(t, Scoped):
            return f"{show_tuple(t.scope, names)}:{go(t.body)}"
        if isinstance(t, Binary):
            parts = []
            node = t
            # left-nested chains of one operator print flat
            while isinstance(node, type(t)) and type(node) is type(t):
                parts.append(node.right)
                node = node.left
            parts.append(node)
            return "(" + t.symbol.join(go(p) for p in reversed(parts)) + ")"
        raise TypeError(f"not a policy term: {t!r}")

    return go(term)
