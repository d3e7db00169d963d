"""Concrete finite G-sets with an explicit action on labelled points.

Everything here works point by point and is deliberately naive: it exists to
check the multiplicity-vector calculus in :mod:`equistab.gsets` by brute force.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .groups import Element, FiniteAbelianGroup, SubgroupId
from .gsets import GSetClass, OrbitTypes


@dataclass(frozen=True)
class ConcreteGSet:
    """Disjoint union of coset spaces K/H_i; a point is (i, coset representative)."""

    group: FiniteAbelianGroup
    ambient: SubgroupId
    orbit_subgroups: tuple[SubgroupId, ...]

    @classmethod
    def from_class(cls, S: GSetClass) -> "ConcreteGSet":
        subs = []
        for H, m in S.items():
            subs += [H] * m
        return cls(S.types.group, S.types.ambient, tuple(subs))

    def _rep(self, g: Element, H: SubgroupId) -> Element:
        return min(self.group.add(g, h) for h in H.elements)

    @cached_property
    def points(self) -> tuple[tuple[int, Element], ...]:
        out = []
        for i, H in enumerate(self.orbit_subgroups):
            reps = sorted({self._rep(k, H) for k in self.ambient.elements})
            out += [(i, r) for r in reps]
        return tuple(out)

    def act(self, g: Element, point: tuple[int, Element]) -> tuple[int, Element]:
        i, c = point
        return i, self._rep(self.group.add(c, g), self.orbit_subgroups[i])

    def __len__(self) -> int:
        return len(self.points)

    def fixed_points(self, L: SubgroupId) -> list:
        return [x for x in self.points if all(self.act(g, x) == x for g in L.elements)]

    def classify(self, L: SubgroupId | None = None) -> GSetClass:
        """Orbit decomposition under L (default: the ambient group)."""
        L = self.ambient if L is None else L
        return classify_action(self.group, L, self.points, self.act)


def stabilizer(group: FiniteAbelianGroup, L: SubgroupId, x, act: Callable) -> SubgroupId:
    return SubgroupId(tuple(g for g in L.elements if act(g, x) == x))


def classify_action(group: FiniteAbelianGroup, L: SubgroupId, points: Iterable[Hashable],
                    act: Callable) -> GSetClass:
    """Split ``points`` into L-orbits and record the stabilizer of each orbit."""
    types = OrbitTypes.of(group, L)
    mults = [0] * len(types.subgroups)
    seen = set()
    for x in points:
        if x in seen:
            continue
        orbit = {act(g, x) for g in L.elements}
        seen |= orbit
        mults[types.index_of(stabilizer(group, L, x, act))] += 1
    return GSetClass(types, tuple(mults))


def product_class(X: ConcreteGSet, Y: ConcreteGSet) -> GSetClass:
    """Orbit decomposition of X x Y with the diagonal action."""
    pts = [(x, y) for x in X.points for y in Y.points]
    return classify_action(X.group, X.ambient, pts, lambda g, p: (X.act(g, p[0]), Y.act(g, p[1])))


def is_invariant(X: ConcreteGSet, subset: Sequence, generators: Sequence[Element]) -> bool:
    s = set(subset)
    return all(X.act(g, x) in s for g in generators for x in subset)
