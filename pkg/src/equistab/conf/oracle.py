"""Discrete model: invariant subsets of an explicit finite G-set.

Brute force over all n-subsets, used to check the orbit-type decomposition of
fixed configuration spaces against the closed form prod_H binom(m_H, k_H).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from ..concrete import ConcreteGSet, classify_action, is_invariant
from ..errors import DomainError, ResourceBoundError
from ..gsets import GSetClass, enumerate_gsets

MAX_POINTS = 20


@dataclass(frozen=True)
class Census:
    n: int
    counts: tuple[tuple[GSetClass, int], ...]  # every class of cardinality n, in enumeration order

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict[GSetClass, int]:
        return dict(self.counts)

    def to_json(self) -> dict:
        return {"n": self.n, "total": self.total,
                "classes": [{"gset": S.label(), "mults": list(S.mults), "count": c} for S, c in self.counts]}


def discrete_config_oracle(X: ConcreteGSet, n: int, max_points: int = MAX_POINTS) -> Census:
    """Count G-invariant n-subsets of X by their isomorphism type."""
    if len(X) > max_points:
        raise ResourceBoundError(f"|X| = {len(X)} exceeds the brute-force bound {max_points}")
    if not 0 <= n <= len(X):
        raise DomainError(f"n must lie in 0..{len(X)}")
    types = X.classify().types
    counts = {S: 0 for S in enumerate_gsets(types, n)}
    gens = X.ambient.elements
    for subset in combinations(X.points, n):
        if is_invariant(X, subset, gens):
            counts[classify_action(X.group, X.ambient, subset, X.act)] += 1
    return Census(n, tuple(counts.items()))


def census_closed_form(X: GSetClass, n: int) -> Census:
    """Choose k_H of the m_H orbits of each type: prod_H binom(m_H, k_H)."""
    counts = []
    for S in enumerate_gsets(X.types, n):
        c = 1
        for m, k in zip(X.mults, S.mults):
            c *= comb(m, k)
        counts.append((S, c))
    return Census(n, tuple(counts))
