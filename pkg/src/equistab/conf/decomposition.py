"""Components of fixed configuration spaces and their product decomposition.

A G-invariant configuration of n points is a G-set S of cardinality n placed
in M; its orbits of type [G/H] sit in the stratum M_(H), so the component of
type S is the product over H of unordered configurations of k_H points in
M_(H)/G.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError
from ..groups import SubgroupId
from ..gsets import GSetClass, enumerate_gsets
from .descriptor import ManifoldDescriptor


def is_realizable(S: GSetClass, M: ManifoldDescriptor) -> bool:
    return all(M.nonempty(H) for H in S.support())


def components_of_fixed_config(M: ManifoldDescriptor, n: int) -> list[GSetClass]:
    """G-set classes of cardinality n that can be placed in M (open strata hold any number of orbits)."""
    if n < 0:
        raise DomainError("cardinality must be nonnegative")
    return [S for S in enumerate_gsets(M.types, n) if is_realizable(S, M)]


@dataclass(frozen=True)
class Factor:
    subgroup: SubgroupId
    k: int
    stratum: str  # subgroup label
    label: str    # e.g. "C_2(M_(G)/G)"


@dataclass(frozen=True)
class CSDecomposition:
    gset: GSetClass
    factors: tuple[Factor, ...]
    connected: bool | None  # all factor quotients connected

    def describe(self) -> str:
        if not self.factors:
            return "point"
        return " x ".join(f.label for f in self.factors)

    def to_json(self) -> dict:
        return {"gset": self.gset.label(), "cardinality": self.gset.cardinality,
                "factors": [{"subgroup": f.stratum, "k": f.k, "space": f.label}
                            for f in self.factors],
                "product": self.describe(),
                "components": 1 if self.connected else None}


def cs_decomposition(S: GSetClass, M: ManifoldDescriptor) -> CSDecomposition:
    if S.types != M.types:
        raise DomainError("G-set and manifold are over different groups")
    factors = []
    connected = True
    for H, k in S.items():
        if not M.nonempty(H):
            raise DomainError(f"S is not realizable: the stratum M_({M.label(H)}) is empty")
        c = M.flags[H].connected
        if c is False:
            connected = False
        elif c is None and connected:
            connected = None
        factors.append(Factor(H, k, M.label(H), f"C_{k}(M_({M.label(H)})/{M.label(M.ambient)})"))
    return CSDecomposition(S, tuple(factors), connected)


@dataclass(frozen=True)
class Stabilization:
    source: GSetClass
    target: GSetClass
    subgroup: SubgroupId
    k_before: int

    def to_json(self) -> dict:
        return {"source": self.source.label(), "target": self.target.label(),
                "added_orbit_size": self.target.cardinality - self.source.cardinality,
                "factor_map": f"C_{self.k_before} -> C_{self.k_before + 1}"}


def stabilize_component(S: GSetClass, H: SubgroupId, M: ManifoldDescriptor) -> Stabilization:
    """S -> S + [G/H]; on the product decomposition only the H-factor moves, C_k -> C_{k+1}."""
    if S.types != M.types:
        raise DomainError("G-set and manifold are over different groups")
    if not M.stabilizable(H):
        raise DomainError(f"M is not {M.label(H)}-stabilizable")
    return Stabilization(S, S + M.types.orbit(H), H, S.mult(H))
