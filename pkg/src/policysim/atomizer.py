"""Shared vocabulary of pairwise-disjoint atoms for a pair of policies.

Each attribute domain is partitioned by value signature: two values share a
block iff every value-set mentioned by either policy contains both or
neither. Every mentioned value-set is then an exact union of blocks.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .errors import SchemaMismatch
from .model import OTHER, AttributeSchema
from .semantics import SemPair, leaves


@dataclass(frozen=True)
class Atom:
    id: str
    attribute: str
    values: frozenset

    @property
    def residual(self) -> bool:
        return OTHER in self.values

    def representative(self) -> str:
        """A concrete value for requests; the residual marker only if nothing else."""
        named = sorted(self.values - {OTHER})
        return named[0] if named else OTHER


def atom_id(attribute: str, block: frozenset) -> str:
    if len(block) == 1:
        return f"{attribute}:{next(iter(block))}"
    return f"{attribute}:{{{','.join(sorted(block))}}}"


def partition(domain: frozenset, sets: Iterable[frozenset]) -> list[frozenset]:
    """Coarsest partition of `domain` refining every set in `sets`."""
    sets = sorted({frozenset(s) for s in sets}, key=sorted)
    groups = defaultdict(set)
    for v in domain:
        groups[tuple(v in s for s in sets)].add(v)
    return sorted((frozenset(g) for g in groups.values()), key=sorted)


@dataclass(frozen=True)
class AtomizedPair:
    p1: SemPair
    p2: SemPair
    schema: AttributeSchema
    vocabulary: tuple[Atom, ...]

    def atoms_of(self, attribute: str) -> tuple[Atom, ...]:
        return tuple(a for a in self.vocabulary if a.attribute == attribute)

    def atoms_for(self, attribute: str, values: frozenset) -> tuple[Atom, ...]:
        """Atoms whose blocks make up `values` exactly."""
        found = tuple(a for a in self.atoms_of(attribute) if a.values <= values)
        covered = frozenset().union(*(a.values for a in found)) if found else frozenset()
        if covered != values:
            raise SchemaMismatch(
                f"value-set {sorted(values)} of {attribute!r} is not a union of atom blocks")
        return found

    def atom(self, atom_id_: str) -> Atom:
        for a in self.vocabulary:
            if a.id == atom_id_:
                return a
        raise KeyError(atom_id_)

    def atom_of_value(self, attribute: str, value: str) -> Atom:
        for a in self.atoms_of(attribute):
            if value in a.values:
                return a
        raise SchemaMismatch(f"value {value!r} outside domain of {attribute!r}")


def mentioned_sets(pairs: Iterable[SemPair], schema: AttributeSchema) -> dict[str, set]:
    out = {name: set() for name in schema.names}
    for pair in pairs:
        for part in (pair.accept, pair.deny):
            for box in leaves(part):
                if box.tup.schema != schema:
                    raise SchemaMismatch("semantic pair built over a different schema")
                for comp, (name, domain) in zip(box.tup.components, schema.slots):
                    if comp and comp != domain:
                        out[name].add(comp)
    return out


def atomize(p1: SemPair, p2: SemPair, schema: AttributeSchema) -> AtomizedPair:
    sets = mentioned_sets((p1, p2), schema)
    vocab = []
    for name, domain in schema.slots:
        for block in partition(domain, sets[name]):
            vocab.append(Atom(atom_id(name, block), name, block))
    return AtomizedPair(p1, p2, schema, tuple(vocab))


def atom_count(pair: AtomizedPair) -> dict[str, int]:
    return {name: len(pair.atoms_of(name)) for name in pair.schema.names}
