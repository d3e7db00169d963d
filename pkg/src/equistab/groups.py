"""Finite abelian groups given by invariant factors and their subgroup lattices."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import prod
from typing import Iterable

import numpy as np

from .errors import DomainError, ResourceBoundError, ValidationError
from .intlinalg import smith_normal_form, zeros

Element = tuple[int, ...]

DEFAULT_ORDER_BOUND = 64


@dataclass(frozen=True)
class SubgroupId:
    """A subgroup stored by its sorted element set (canonical form)."""

    elements: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def issubgroup(self, other: "SubgroupId") -> bool:
        return self._set <= other._set

    def __le__(self, other: "SubgroupId") -> bool:
        return self.issubgroup(other)

    def __lt__(self, other: "SubgroupId") -> bool:
        return self.issubgroup(other) and self.order < other.order

    def sort_key(self):
        return (self.order, self.elements)

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.elements]


@dataclass(frozen=True)
class Quotient:
    group: "FiniteAbelianGroup"
    projection_matrix: tuple[tuple[int, ...], ...]

    def project(self, g: Element) -> Element:
        return tuple(
            sum(c * x for c, x in zip(row, g)) % d
            for row, d in zip(self.projection_matrix, self.group.invariant_factors)
        )


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r, each d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", dims)
        for i, d in enumerate(dims):
            if d < 2:
                raise ValidationError(f"invariant factor {d} < 2")
            if i and d % dims[i - 1]:
                raise ValidationError(f"invariant factors {dims} do not form a divisor chain")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        return cls((n,) if n > 1 else ())

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Any product of cyclic groups, rewritten in invariant factor form."""
        orders = [int(o) for o in orders if int(o) != 1]
        if not orders:
            return cls(())
        snf = smith_normal_form(np.diag(np.array(orders, dtype=object)).astype(object), transforms=False)
        return cls(tuple(s for s in snf.diagonal if s > 1))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def name(self) -> str:
        if not self.invariant_factors:
            return "1"
        return "x".join(f"C{d}" for d in self.invariant_factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(product(*(range(d) for d in self.invariant_factors)))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def mul(self, k: int, a: Element) -> Element:
        return tuple((k * x) % d for x, d in zip(a, self.invariant_factors))

    def element(self, g) -> Element:
        if isinstance(g, int) and not isinstance(g, bool) and self.rank == 1:
            g = (g,)  # cyclic groups: bare integers, as in subgroup labels
        try:
            g = tuple(int(x) for x in g)
        except (TypeError, ValueError):
            raise ValidationError(f"cannot read group element from {g!r}") from None
        if len(g) != self.rank:
            raise DomainError(f"element {g} has wrong length for {self.name()}")
        return tuple(x % d for x, d in zip(g, self.invariant_factors))

    def element_order(self, g: Element) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.add(x, g)
            k += 1
        return k

    # -- subgroups -----------------------------------------------------

    def closure(self, gens: Iterable[Element]) -> SubgroupId:
        members = {self.identity}
        frontier = [self.identity]
        gens = [self.element(g) for g in gens]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in members:
                        members.add(y)
                        new.append(y)
            frontier = new
        return SubgroupId(tuple(sorted(members)))

    @property
    def trivial(self) -> SubgroupId:
        return SubgroupId((self.identity,))

    @property
    def whole(self) -> SubgroupId:
        return SubgroupId(self.elements)

    def check_subgroup(self, H: SubgroupId) -> SubgroupId:
        if not isinstance(H, SubgroupId):
            raise DomainError(f"{H!r} is not a subgroup")
        for g in H.elements:
            if len(g) != self.rank or any(not 0 <= x < d for x, d in zip(g, self.invariant_factors)):
                raise DomainError(f"{g} is not an element of {self.name()}")
        s = set(H.elements)
        if self.identity not in s or any(self.add(a, b) not in s for a in s for b in s):
            raise DomainError(f"element set {H.elements} is not a subgroup of {self.name()}")
        return H

    def subgroups(self, bound: int | None = None) -> tuple[SubgroupId, ...]:
        return enumerate_subgroups(self, bound)

    def index(self, H: SubgroupId) -> int:
        return self.order // H.order

    def meet(self, H: SubgroupId, K: SubgroupId) -> SubgroupId:
        return SubgroupId(tuple(sorted(H._set & K._set)))

    def join(self, H: SubgroupId, K: SubgroupId) -> SubgroupId:
        return SubgroupId(tuple(sorted({self.add(h, k) for h in H.elements for k in K.elements})))

    def quotient(self, H: SubgroupId) -> Quotient:
        """G/H in invariant factor form together with the projection G -> G/H."""
        r = self.rank
        if r == 0:
            return Quotient(FiniteAbelianGroup(()), ())
        cols = [list(col) for col in np.diag(np.array(self.invariant_factors, dtype=object)).T]
        cols += [list(h) for h in H.elements if h != self.identity]
        A = zeros(r, len(cols))
        for j, c in enumerate(cols):
            for i in range(r):
                A[i, j] = c[i]
        snf = smith_normal_form(A)
        rows = [i for i, s in enumerate(snf.diagonal) if s > 1]
        factors = tuple(snf.diagonal[i] for i in rows)
        proj = tuple(tuple(int(x) % snf.diagonal[i] for x in snf.U[i]) for i in rows)
        return Quotient(FiniteAbelianGroup(factors), proj)

    def cosets(self, H: SubgroupId) -> tuple[Element, ...]:
        """Canonical coset representatives (the least element of each coset)."""
        seen, reps = set(), []
        for g in self.elements:
            if g in seen:
                continue
            reps.append(g)
            seen.update(self.add(g, h) for h in H.elements)
        return tuple(reps)

    def coset_rep(self, g: Element, H: SubgroupId) -> Element:
        return min(self.add(g, h) for h in H.elements)

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors)}


def _minimal_generators(G: FiniteAbelianGroup, K: SubgroupId) -> list[Element]:
    gens, current = [], G.trivial
    for g in sorted(K.elements, key=lambda x: (-G.element_order(x), x)):
        if g not in current:
            gens.append(g)
            current = G.closure(gens)
    return gens


@lru_cache(maxsize=256)
def _enumerate(G: FiniteAbelianGroup) -> tuple[SubgroupId, ...]:
    found = {G.trivial}
    frontier = [G.trivial]
    while frontier:
        new = []
        for H in frontier:
            for g in G.elements:
                if g in H:
                    continue
                K = G.join(H, G.closure([g]))
                if K not in found:
                    found.add(K)
                    new.append(K)
        frontier = new
    return tuple(sorted(found, key=SubgroupId.sort_key))


def enumerate_subgroups(G: FiniteAbelianGroup, bound: int | None = None) -> tuple[SubgroupId, ...]:
    """All subgroups, ordered by (order, element list) which refines inclusion."""
    bound = DEFAULT_ORDER_BOUND if bound is None else bound
    if G.order > bound:
        raise ResourceBoundError(f"group order {G.order} exceeds the configured bound {bound}")
    return _enumerate(G)


def containment(subgroups: tuple[SubgroupId, ...]) -> list[tuple[int, int]]:
    """Index pairs (i, j) with subgroups[i] <= subgroups[j]."""
    return [(i, j) for i, H in enumerate(subgroups) for j, K in enumerate(subgroups) if H <= K]


@dataclass(frozen=True)
class LatticeOps:
    meet: SubgroupId
    join: SubgroupId
    index: int
    quotient: Quotient


def lattice_ops(G: FiniteAbelianGroup, H: SubgroupId, K: SubgroupId) -> LatticeOps:
    G.check_subgroup(H)
    G.check_subgroup(K)
    return LatticeOps(G.meet(H, K), G.join(H, K), G.index(H), G.quotient(H))


def minimal_overgroups(G: FiniteAbelianGroup, H: SubgroupId) -> list[SubgroupId]:
    above = [K for K in G.subgroups() if H < K]
    return [K for K in above if not any(H < L < K for L in above)]


def parse_group(data) -> FiniteAbelianGroup:
    """Accept ``{"invariant_factors": [...]}``, a bare list, or a string like ``'[2,4]'``."""
    import json

    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"cannot parse group descriptor {data!r}") from exc
    if isinstance(data, dict):
        if "invariant_factors" not in data:
            raise ValidationError("group descriptor needs 'invariant_factors'")
        data = data["invariant_factors"]
    if isinstance(data, int):
        data = [data]
    if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
        raise ValidationError(f"bad group descriptor {data!r}")
    return FiniteAbelianGroup.from_orders(data)


def parse_subgroup(G: FiniteAbelianGroup, data) -> SubgroupId:
    """A subgroup from ``"e"``, ``"G"``, an index into :func:`enumerate_subgroups`,
    ``{"generators": [...]}`` or ``{"elements": [...]}`` / a bare element list."""
    if data in ("e", "1", "trivial"):
        return G.trivial
    if data == "G":
        return G.whole
    if isinstance(data, int) and not isinstance(data, bool):
        subs = G.subgroups()
        if not 0 <= data < len(subs):
            raise DomainError(f"subgroup index {data} out of range (0..{len(subs) - 1})")
        return subs[data]
    if isinstance(data, dict):
        if "generators" in data:
            return G.closure(data["generators"])
        data = data.get("elements")
    if isinstance(data, list):
        elems = tuple(sorted(G.element(g) for g in data))
        return G.check_subgroup(SubgroupId(tuple(dict.fromkeys(elems))))
    raise ValidationError(f"cannot read subgroup from {data!r}")


def subgroup_label(G: FiniteAbelianGroup, H: SubgroupId) -> str:
    """Short human-readable name: 'e', 'G' or '<generators>'."""
    if H.order == 1:
        return "e"
    if H.order == G.order:
        return "G"
    gens = _minimal_generators(G, H)
    return "<" + ",".join("(" + ",".join(map(str, g)) + ")" if len(g) > 1 else str(g[0]) for g in gens) + ">"
