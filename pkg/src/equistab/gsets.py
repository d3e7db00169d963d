"""Isomorphism classes of finite G-sets as orbit multiplicity vectors.

For abelian G orbit types are exactly subgroups, so a class is a vector of
multiplicities indexed by the subgroup list of the ambient group.  The ambient
group may be any subgroup K of a fixed group G; K-sets are then indexed by the
subgroups of G contained in K.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from .errors import DomainError, ValidationError
from .groups import FiniteAbelianGroup, SubgroupId, subgroup_label


@dataclass(frozen=True)
class OrbitTypes:
    """The orbit types [K/H] (H <= K) of K-sets, K a subgroup of ``group``."""

    group: FiniteAbelianGroup
    ambient: SubgroupId

    @classmethod
    def of(cls, G: FiniteAbelianGroup, K: SubgroupId | None = None) -> "OrbitTypes":
        return _orbit_types(G, G.whole if K is None else K)

    @cached_property
    def subgroups(self) -> tuple[SubgroupId, ...]:
        return tuple(H for H in self.group.subgroups() if H <= self.ambient)

    @cached_property
    def position(self) -> dict[SubgroupId, int]:
        return {H: i for i, H in enumerate(self.subgroups)}

    @cached_property
    def orbit_sizes(self) -> tuple[int, ...]:
        return tuple(self.ambient.order // H.order for H in self.subgroups)

    def index_of(self, H: SubgroupId) -> int:
        try:
            return self.position[H]
        except KeyError:
            raise DomainError(f"{H.elements} is not a subgroup of the ambient group") from None

    def label(self, H: SubgroupId) -> str:
        if H == self.ambient:
            return "K" if self.ambient != self.group.whole else "G"
        return subgroup_label(self.group, H)

    def orbit(self, H: SubgroupId, mult: int = 1) -> "GSetClass":
        v = [0] * len(self.subgroups)
        v[self.index_of(H)] = mult
        return GSetClass(self, tuple(v))

    def empty(self) -> "GSetClass":
        return GSetClass(self, (0,) * len(self.subgroups))

    def restrict_to(self, L: SubgroupId) -> "OrbitTypes":
        if not L <= self.ambient:
            raise DomainError("restriction target is not a subgroup of the ambient group")
        return OrbitTypes.of(self.group, L)


@lru_cache(maxsize=None)
def _orbit_types(G: FiniteAbelianGroup, K: SubgroupId) -> OrbitTypes:
    return OrbitTypes(G, K)


@dataclass(frozen=True)
class GSetClass:
    """A finite K-set up to isomorphism: ``mults[i]`` copies of [K/H_i]."""

    types: OrbitTypes
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.mults) != len(self.types.subgroups):
            raise ValidationError("multiplicity vector has wrong length")
        if any(m < 0 for m in self.mults):
            raise ValidationError("negative orbit multiplicity")

    @property
    def cardinality(self) -> int:
        return sum(m * s for m, s in zip(self.mults, self.types.orbit_sizes))

    def __len__(self) -> int:
        return self.cardinality

    def mult(self, H: SubgroupId) -> int:
        return self.mults[self.types.index_of(H)]

    def support(self) -> list[SubgroupId]:
        return [H for H, m in zip(self.types.subgroups, self.mults) if m]

    def items(self) -> Iterator[tuple[SubgroupId, int]]:
        for H, m in zip(self.types.subgroups, self.mults):
            if m:
                yield H, m

    def is_empty(self) -> bool:
        return not any(self.mults)

    def __add__(self, other: "GSetClass") -> "GSetClass":
        return disjoint_union(self, other)

    def minus(self, other: "GSetClass") -> "GSetClass | None":
        if other.types != self.types:
            raise DomainError("ambient group mismatch")
        diff = tuple(a - b for a, b in zip(self.mults, other.mults))
        return None if any(x < 0 for x in diff) else GSetClass(self.types, diff)

    def label(self) -> str:
        if self.is_empty():
            return "0"
        parts = []
        for H, m in self.items():
            orb = f"[{self.types.label(self.types.ambient)}/{self.types.label(H)}]"
            parts.append(orb if m == 1 else f"{m}{orb}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.label()

    def to_json(self) -> dict:
        return {"orbits": [{"subgroup": H.to_json(), "mult": m} for H, m in self.items()],
                "cardinality": self.cardinality, "label": self.label()}


def disjoint_union(S: GSetClass, T: GSetClass) -> GSetClass:
    if S.types != T.types:
        raise DomainError("ambient group mismatch in disjoint union")
    return GSetClass(S.types, tuple(a + b for a, b in zip(S.mults, T.mults)))


def _vectors(sizes: tuple[int, ...], n: int) -> Iterator[tuple[int, ...]]:
    if not sizes:
        if n == 0:
            yield ()
        return
    first, rest = sizes[0], sizes[1:]
    for m in range(n // first + 1):
        for tail in _vectors(rest, n - m * first):
            yield (m,) + tail


def enumerate_gsets(types: OrbitTypes | FiniteAbelianGroup, n: int) -> list[GSetClass]:
    """All classes of cardinality ``n`` in lexicographic order of multiplicity vectors."""
    if isinstance(types, FiniteAbelianGroup):
        types = OrbitTypes.of(types)
    if n < 0:
        raise DomainError("cardinality must be nonnegative")
    return [GSetClass(types, v) for v in _vectors(types.orbit_sizes, n)]


def enumerate_gsets_upto(types: OrbitTypes | FiniteAbelianGroup, n_max: int) -> list[GSetClass]:
    """All classes of cardinality <= n_max, ordered by cardinality then lexicographically."""
    return [S for n in range(n_max + 1) for S in enumerate_gsets(types, n)]


def restrict_gset(S: GSetClass, L: SubgroupId) -> GSetClass:
    """Restriction to L <= K: [K/H] becomes [K:HL] copies of [L/(L meet H)]."""
    G = S.types.group
    G.check_subgroup(L)
    target = S.types.restrict_to(L)
    out = [0] * len(target.subgroups)
    for H, m in S.items():
        HL = G.join(H, L)
        copies = S.types.ambient.order // HL.order
        out[target.index_of(G.meet(L, H))] += m * copies
    return GSetClass(target, tuple(out))


def induce_gset(S: GSetClass, K: SubgroupId) -> GSetClass:
    """Induction from the ambient group H <= K up to K: [H/L] becomes [K/L]."""
    if not S.types.ambient <= K:
        raise DomainError("induction target must contain the ambient group")
    target = OrbitTypes.of(S.types.group, K)
    out = [0] * len(target.subgroups)
    for L, m in S.items():
        out[target.index_of(L)] += m
    return GSetClass(target, tuple(out))


def marks(S: GSetClass) -> tuple[int, ...]:
    """|S^L| for each subgroup L of the ambient group (abelian: [K:H] if L <= H)."""
    return tuple(
        sum(m * s for H, m, s in zip(S.types.subgroups, S.mults, S.types.orbit_sizes) if L <= H)
        for L in S.types.subgroups
    )


def table_of_marks(types: OrbitTypes | FiniteAbelianGroup) -> list[list[int]]:
    """Rows indexed by subgroups L, columns by orbits [K/H]: |(K/H)^L|."""
    if isinstance(types, FiniteAbelianGroup):
        types = OrbitTypes.of(types)
    return [[s if L <= H else 0 for H, s in zip(types.subgroups, types.orbit_sizes)]
            for L in types.subgroups]


def from_marks(types: OrbitTypes, mark_vector: Iterable[int]) -> GSetClass:
    """Invert the (upper triangular) marks homomorphism; raises if not a G-set."""
    mark_vector = list(mark_vector)
    n = len(types.subgroups)
    mults = [0] * n
    for i in reversed(range(n)):
        H = types.subgroups[i]
        rest = mark_vector[i] - sum(mults[j] * types.orbit_sizes[j]
                                    for j in range(i + 1, n) if H <= types.subgroups[j])
        size = types.orbit_sizes[i]
        if rest % size or rest < 0:
            raise DomainError("mark vector is not the marks of a K-set")
        mults[i] = rest // size
    return GSetClass(types, tuple(mults))


def orbit_product(types: OrbitTypes, H: SubgroupId, K: SubgroupId) -> GSetClass:
    """[A/H] x [A/K] = [A:HK] copies of [A/(H meet K)] for the ambient group A."""
    G = types.group
    copies = types.ambient.order // G.join(H, K).order
    return types.orbit(G.meet(H, K), copies)


def burnside_product(S: GSetClass, T: GSetClass) -> GSetClass:
    if S.types != T.types:
        raise DomainError("ambient group mismatch in product")
    out = S.types.empty()
    for H, m in S.items():
        for K, k in T.items():
            P = orbit_product(S.types, H, K)
            out = out + GSetClass(S.types, tuple(m * k * x for x in P.mults))
    return out


def parse_gset(types: OrbitTypes, data) -> GSetClass:
    """Read ``{"orbits": [{"subgroup": <id>, "mult": k}, ...]}``."""
    from .groups import parse_subgroup

    if not isinstance(data, dict) or not isinstance(data.get("orbits", []), list):
        raise ValidationError("G-set must be an object with an 'orbits' list")
    S = types.empty()
    for entry in data.get("orbits", []):
        if not isinstance(entry, dict) or "subgroup" not in entry:
            raise ValidationError(f"bad orbit entry {entry!r}")
        H = parse_subgroup(types.group, entry["subgroup"])
        m = int(entry.get("mult", 1))
        if m < 0:
            raise ValidationError("negative multiplicity")
        S = S + types.orbit(H, m)
    return S
