"""Presentation of Bredon H_0 of C(M) = disjoint union of C_n(M), constant Z coefficients.

At level H the components of C(M)^H are the H-set classes T placeable in M,
one generator x[H; T] each (graded by |T|).  For H < K and a K-set T the
inclusion of fixed points gives the relation

    x[H; res^K_H T] = [K:H] * x[K; T],

and sigma[A/J] acts at level H by T -> T + res^A_H [A/J].
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError
from ..groups import SubgroupId, subgroup_label
from ..gsets import GSetClass, OrbitTypes, enumerate_gsets, restrict_gset
from ..intlinalg import Presentation, zeros
from ..stability import MultigradedModule, Operator
from .descriptor import ManifoldDescriptor


def _set_label(G, T: GSetClass) -> str:
    if T.is_empty():
        return "0"
    amb = subgroup_label(G, T.types.ambient)
    parts = []
    for L, m in T.items():
        orb = f"[{amb}/{subgroup_label(G, L)}]"
        parts.append(orb if m == 1 else f"{m}{orb}")
    return " + ".join(parts)


@dataclass
class H0Presentation:
    descriptor: ManifoldDescriptor
    bound: int
    generators: dict[int, list[tuple[SubgroupId, GSetClass]]]
    relations: dict[int, list[tuple[SubgroupId, SubgroupId, GSetClass]]]  # (H, K, T) per column
    module: MultigradedModule

    def name(self, H: SubgroupId, T: GSetClass) -> str:
        G = self.descriptor.group
        if H.order == 1:
            return f"y[{T.cardinality}]"
        return f"x[{subgroup_label(G, H)}; {_set_label(G, T)}]"

    def free_orbit_relations(self) -> list[dict]:
        """The relations |A| x[A; i[A/e]] = y[i |A|] at free orbits, with the
        exponent of sigma[A/A] they imply on y[0] and the orbit-count variant."""
        M = self.descriptor
        A = M.ambient
        if A.order == 1:
            return []
        G = M.group
        out = []
        i = 1
        while i * A.order <= self.bound:
            T = M.types.orbit(G.trivial, i)
            out.append({"generator": self.name(A, T), "multiplier": A.order,
                        "relation": f"{A.order}*{self.name(A, T)} = y[{i * A.order}]",
                        "derived_exponent": i * A.order,
                        "orbit_count_exponent": i,
                        "point_count_display": f"{A.order}*x_{i} = sigma^{i * A.order} y_0",
                        "orbit_count_display": f"{A.order}*x_{i} = sigma^{i} y_0"})
            i += 1
        return out

    def to_json(self) -> dict:
        return {
            "schema": "equistab.h0/1",
            "ambient": subgroup_label(self.descriptor.group, self.descriptor.ambient),
            "bound": self.bound,
            "grades": [{"cardinality": n,
                        "generators": [self.name(H, T) for H, T in self.generators[n]],
                        "relations": [f"{self.name(H, restrict_gset(T, H))} = {K.order // H.order}*{self.name(K, T)}"
                                      for H, K, T in self.relations[n]]}
                       for n in sorted(self.generators)],
            "operators": [op.name for op in self.module.operators.values()],
            "free_orbit_relations": self.free_orbit_relations(),
            "module": self.module.to_json(),
        }


def _check_hypotheses(M: ManifoldDescriptor) -> dict[SubgroupId, ManifoldDescriptor]:
    levels = {}
    for H in M.types.subgroups:
        R = M.restrict(H)
        for L in R.types.subgroups:
            if not R.nonempty(L):
                raise DomainError(f"level {M.label(H)}: stratum {M.label(L)} is empty")
            R.require_connected(L)
        levels[H] = R
    return levels


def bredon_h0_presentation(M: ManifoldDescriptor, bound: int) -> H0Presentation:
    """Graded presentation of H_0 with generators at every level, through cardinality ``bound``."""
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    _check_hypotheses(M)
    G, A = M.group, M.ambient
    subs = M.types.subgroups
    gens: dict[int, list] = {}
    index: dict[int, dict] = {}
    rels: dict[int, list] = {}
    for n in range(bound + 1):
        gens[n] = [(H, T) for H in subs for T in enumerate_gsets(OrbitTypes.of(G, H), n)]
        index[n] = {g: i for i, g in enumerate(gens[n])}
        rels[n] = [(H, K, T) for K in subs for T in enumerate_gsets(OrbitTypes.of(G, K), n)
                   for H in subs if H < K]
    pieces = {}
    for n in range(bound + 1):
        R = zeros(len(gens[n]), len(rels[n]))
        for j, (H, K, T) in enumerate(rels[n]):
            R[index[n][(H, restrict_gset(T, H))], j] += 1
            R[index[n][(K, T)], j] -= K.order // H.order
        pieces[n] = Presentation(len(gens[n]), R)
    ops = []
    for J in subs:
        if not M.stabilizable(J):
            continue
        orbit = M.types.orbit(J)
        shift = orbit.cardinality
        added = {H: restrict_gset(orbit, H) for H in subs}
        maps = {}
        for n in range(bound + 1 - shift):
            F = zeros(len(gens[n + shift]), len(gens[n]))
            for i, (H, T) in enumerate(gens[n]):
                F[index[n + shift][(H, T + added[H])], i] = 1
            maps[n] = (n + shift, F)
        ops.append(Operator(J, f"sigma[{subgroup_label(G, A)}/{subgroup_label(G, J)}]", shift, maps))
    pres = H0Presentation(M, bound, gens, rels, None)
    labels = {n: [pres.name(H, T) for H, T in gens[n]] for n in gens}
    pres.module = MultigradedModule(list(range(bound + 1)), {n: n for n in gens}, pieces, ops, bound,
                                    {n: str(n) for n in gens}, labels)
    return pres


def h0_level_modules(M: ManifoldDescriptor, bound: int) -> dict[SubgroupId, MultigradedModule]:
    """Level K module: Bredon H_0 of C(M) for the K-action, over P_K."""
    return {K: bredon_h0_presentation(M.restrict(K), bound).module for K in M.types.subgroups}
