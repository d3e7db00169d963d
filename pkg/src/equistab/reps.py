"""Real representations of finite abelian groups from character data.

A character of G = Z/d_1 x ... x Z/d_r is a coefficient tuple c acting by
a -> sum c_i a_i / d_i (mod 1).  Real representations identify a character with
its negative; the realified summand has dimension 1 when the character takes
values in {0, 1/2} and dimension 2 otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DomainError, ValidationError
from .groups import Element, FiniteAbelianGroup, SubgroupId, parse_subgroup

Character = tuple[int, ...]


def canonical_character(G: FiniteAbelianGroup, coeffs: Sequence[int]) -> Character:
    if len(coeffs) != G.rank:
        raise ValidationError(f"character {tuple(coeffs)} has wrong length for {G.name()}")
    c = tuple(int(x) % d for x, d in zip(coeffs, G.invariant_factors))
    neg = tuple((-x) % d for x, d in zip(c, G.invariant_factors))
    return min(c, neg)


def character_value(G: FiniteAbelianGroup, c: Character, g: Element) -> int:
    """Value as a residue modulo the exponent of G (0 means trivial)."""
    e = G.exponent
    return sum(ci * gi * (e // d) for ci, gi, d in zip(c, g, G.invariant_factors)) % e


def real_dimension(G: FiniteAbelianGroup, c: Character) -> int:
    return 1 if all(2 * x % d == 0 for x, d in zip(c, G.invariant_factors)) else 2


def kernel(G: FiniteAbelianGroup, c: Character) -> SubgroupId:
    return SubgroupId(tuple(g for g in G.elements if character_value(G, c, g) == 0))


@dataclass(frozen=True)
class Stratum:
    subgroup: SubgroupId
    fixed_dim: int
    minimal_overgroups: tuple[SubgroupId, ...]


@dataclass(frozen=True)
class RealRepresentation:
    """Multiset of realified characters; ``ambient`` is the acting subgroup
    (the whole group unless the representation was restricted)."""

    group: FiniteAbelianGroup
    characters: tuple[tuple[Character, int], ...]
    ambient: SubgroupId | None = field(default=None)

    def __post_init__(self):
        merged: dict[Character, int] = {}
        for c, m in self.characters:
            if m < 0:
                raise ValidationError("negative character multiplicity")
            if m:
                key = canonical_character(self.group, c)
                merged[key] = merged.get(key, 0) + int(m)
        object.__setattr__(self, "characters", tuple(sorted(merged.items())))
        if self.ambient is None:
            object.__setattr__(self, "ambient", self.group.whole)

    @property
    def dim(self) -> int:
        return sum(real_dimension(self.group, c) * m for c, m in self.characters)

    def restrict(self, K: SubgroupId) -> "RealRepresentation":
        self.group.check_subgroup(K)
        if not K <= self.ambient:
            raise DomainError("restriction target is not contained in the acting group")
        return RealRepresentation(self.group, self.characters, K)

    @cached_property
    def subgroups(self) -> tuple[SubgroupId, ...]:
        return tuple(H for H in self.group.subgroups() if H <= self.ambient)

    def to_json(self) -> dict:
        return {"characters": [{"coeffs": list(c), "mult": m} for c, m in self.characters],
                "dim": self.dim}


def fixed_dim(V: RealRepresentation, H: SubgroupId) -> int:
    """dim V^H: total real dimension of the summands whose character kills H."""
    G = V.group
    return sum(real_dimension(G, c) * m for c, m in V.characters
               if all(character_value(G, c, h) == 0 for h in H.elements))


def _minimal_over(V: RealRepresentation, H: SubgroupId) -> list[SubgroupId]:
    above = [K for K in V.subgroups if H < K]
    return [K for K in above if not any(H < L < K for L in above)]


def isotropy_strata(V: RealRepresentation) -> list[Stratum]:
    """Subgroups occurring as exact stabilizers (the origin contributes the ambient group)."""
    out = []
    for H in V.subgroups:
        d = fixed_dim(V, H)
        mins = _minimal_over(V, H)
        if all(d > fixed_dim(V, K) for K in mins):
            out.append(Stratum(H, d, tuple(mins)))
    return out


def is_stabilizable(V: RealRepresentation, H: SubgroupId) -> bool:
    """Whether the unit sphere S(V) has a point with exact isotropy H."""
    if not H <= V.ambient:
        raise DomainError("subgroup is not contained in the acting group")
    d = fixed_dim(V, H)
    return d >= 1 and all(d > fixed_dim(V, K) for K in _minimal_over(V, H))


def regular_rep(G: FiniteAbelianGroup, n: int = 1) -> RealRepresentation:
    """n copies of the real regular representation (each real summand once per copy)."""
    if n < 1:
        raise DomainError("regular representation multiple must be >= 1")
    chars = {canonical_character(G, g) for g in G.elements}
    return RealRepresentation(G, tuple((c, n) for c in sorted(chars)))


def vector_stabilizer(V: RealRepresentation, support: Iterable[int]) -> SubgroupId:
    """Exact stabilizer of a vector whose nonzero summands are ``support``
    (indices into the expanded summand list, see :func:`summands`)."""
    chars = summands(V)
    out = set(V.ambient.elements)
    for i in support:
        out &= set(kernel(V.group, chars[i]).elements)
    return SubgroupId(tuple(sorted(out)))


def summands(V: RealRepresentation) -> list[Character]:
    """Irreducible real summands, one entry per copy."""
    return [c for c, m in V.characters for _ in range(m)]


def parse_representation(G: FiniteAbelianGroup, data) -> RealRepresentation:
    """``{"characters": [{"coeffs": [...], "mult": m}, ...]}`` or ``{"regular": n}``."""
    if not isinstance(data, dict):
        raise ValidationError("representation must be a JSON object")
    if "regular" in data:
        return regular_rep(G, int(data["regular"]))
    chars = data.get("characters")
    if not isinstance(chars, list):
        raise ValidationError("representation needs 'characters' or 'regular'")
    out = []
    for entry in chars:
        if not isinstance(entry, dict) or "coeffs" not in entry:
            raise ValidationError(f"bad character entry {entry!r}")
        out.append((tuple(entry["coeffs"]), int(entry.get("mult", 1))))
    V = RealRepresentation(G, tuple(out))
    if "restrict_to" in data:
        V = V.restrict(parse_subgroup(G, data["restrict_to"]))
    return V
