"""Homology of the components C_S^G(M) and the maps induced by stabilization.

Groups come from iterating the Künneth formula over the product
decomposition.  Maps are computed at chain level: each factor is replaced by
a minimal free model of its table homology, the table maps are lifted to
chain maps, and the induced map on the tensor product is read off exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..groups import SubgroupId
from ..gsets import GSetClass, enumerate_gsets_upto
from ..intlinalg import FgAbGroup, Presentation, analyze_hom, homology_basis, identity, induced_map, zeros
from ..stability import MultigradedModule, Operator
from .decomposition import components_of_fixed_config, cs_decomposition, is_realizable, stabilize_component
from .descriptor import HomologyTable, ManifoldDescriptor
from .kunneth import ChainModel, chain_model, kunneth_all, lift_map, tensor_chain_map, tensor_complex

Z = FgAbGroup(1)


def _factor_groups(M: ManifoldDescriptor, H: SubgroupId, k: int, d: int, missing: list[str]) -> list[FgAbGroup]:
    T = M.table(H)
    gaps = T.missing(k, d)
    missing += [f"{g} at {M.label(H)}" for g in gaps]
    return [T.entry(k, i) if T.has_entry(k, i) else FgAbGroup() for i in range(d + 1)]


def homology_of_CSG(S: GSetClass, M: ManifoldDescriptor, d: int) -> FgAbGroup:
    """H_d(C_S^G(M)) by the Künneth formula over the factors C_{k_H}(M_(H)/G)."""
    return homology_of_CSG_all(S, M, d)[d]


def homology_of_CSG_all(S: GSetClass, M: ManifoldDescriptor, d: int) -> list[FgAbGroup]:
    if d < 0:
        raise DomainError("negative degree")
    dec = cs_decomposition(S, M)
    missing: list[str] = []
    graded = [Z] + [FgAbGroup()] * d
    parts = [_factor_groups(M, f.subgroup, f.k, d, missing) for f in dec.factors]
    if missing:
        raise DomainError("missing table entries: " + ", ".join(missing))
    for part in parts:
        graded = kunneth_all(graded, part, d)
    return graded


@dataclass(frozen=True)
class InducedMap:
    source: GSetClass
    target: GSetClass
    subgroup: SubgroupId
    degree: int
    source_group: FgAbGroup
    target_group: FgAbGroup
    matrix: np.ndarray

    @property
    def is_isomorphism(self) -> bool:
        return analyze_hom(self.matrix, Presentation.of_group(self.source_group),
                           Presentation.of_group(self.target_group)).isomorphism


class CSGAssembler:
    """Chain-level models of C_S^G(M) through degree d, with caching."""

    def __init__(self, M: ManifoldDescriptor, d: int):
        if d < 0:
            raise DomainError("negative degree")
        self.M = M
        self.d = d
        self._tables: dict[SubgroupId, HomologyTable] = {}
        self._models: dict[tuple[SubgroupId, int], ChainModel] = {}
        self._lifts: dict[tuple[SubgroupId, int], dict[int, np.ndarray]] = {}

    def table(self, H: SubgroupId) -> HomologyTable:
        if H not in self._tables:
            self._tables[H] = self.M.table(H)
        return self._tables[H]

    def model(self, H: SubgroupId, k: int) -> ChainModel:
        key = (H, k)
        if key not in self._models:
            T = self.table(H)
            gaps = T.missing(k, self.d)
            if gaps:
                raise DomainError("missing table entries: " + ", ".join(f"{g} at {self.M.label(H)}" for g in gaps))
            self._models[key] = chain_model([T.entry(k, i) for i in range(self.d + 1)])
        return self._models[key]

    def lift(self, H: SubgroupId, k: int) -> dict[int, np.ndarray]:
        key = (H, k)
        if key not in self._lifts:
            T = self.table(H)
            gaps = T.missing(k, self.d, with_maps=True)
            if gaps:
                raise DomainError("missing table data: " + ", ".join(f"{g} at {self.M.label(H)}" for g in gaps))
            self._lifts[key] = lift_map(self.model(H, k), self.model(H, k + 1),
                                        [T.map(k, i) for i in range(self.d + 1)])
        return self._lifts[key]

    def stabilization(self, S: GSetClass, H: SubgroupId) -> InducedMap:
        """The map H_d(C_S) -> H_d(C_{S+[G/H]}): lifted table map on the H-factor, identity elsewhere."""
        st = stabilize_component(S, H, self.M)
        cs_decomposition(S, self.M)
        order = self.M.types.subgroups
        factors = [L for L in order if S.mult(L) or L == H]
        top = self.d + 1
        src_cx = tgt_cx = None
        chain = None
        for L in factors:
            k = S.mult(L)
            src = self.model(L, k)
            if L == H:
                tgt = self.model(L, k + 1)
                f = self.lift(L, k)
            else:
                tgt = src
                f = {n: identity(src.complex.rank_at(n)) for n in range(top + 1)}
            if src_cx is None:
                src_cx, tgt_cx, chain = src.complex, tgt.complex, f
                continue
            new_src = tensor_complex(src_cx, src.complex, top)
            new_tgt = tensor_complex(tgt_cx, tgt.complex, top)
            chain = tensor_chain_map(chain, f, new_src, new_tgt, top)
            src_cx, tgt_cx = new_src.complex, new_tgt.complex
        hb_src = homology_basis(src_cx, self.d)
        hb_tgt = homology_basis(tgt_cx, self.d)
        F = induced_map(hb_src, hb_tgt, chain[self.d])
        return InducedMap(S, st.target, H, self.d, hb_src.group, hb_tgt.group, F)


def stabilization_map(S: GSetClass, H: SubgroupId, M: ManifoldDescriptor, d: int) -> InducedMap:
    return CSGAssembler(M, d).stabilization(S, H)


# Range verification ---------------------------------------------------------------

@dataclass(frozen=True)
class RangeEntry:
    gset: str
    cardinality: int
    k: int
    d: int
    iso: bool
    in_range: bool     # d <= k/2
    inputs_iso: bool   # table maps at (k, i) are isomorphisms for all i <= d


@dataclass(frozen=True)
class RangeReport:
    subgroup: str
    entries: tuple[RangeEntry, ...]
    table_violations: tuple[tuple[int, int], ...]  # (k, d) in range with non-iso table map
    failures: tuple[RangeEntry, ...]                # expected iso but not

    @property
    def confirmed(self) -> bool:
        return not self.failures

    @property
    def non_iso(self) -> tuple[RangeEntry, ...]:
        return tuple(e for e in self.entries if not e.iso)

    def to_json(self) -> dict:
        return {"subgroup": self.subgroup, "confirmed": self.confirmed,
                "table_violations": [{"k": k, "d": d} for k, d in self.table_violations],
                "failures": [e.__dict__ for e in self.failures],
                "non_iso": [e.__dict__ for e in self.non_iso],
                "checked": len(self.entries)}


def stability_range_check(M: ManifoldDescriptor, H: SubgroupId, dmax: int, kmax: int) -> RangeReport:
    """For every realizable S with |S| <= kmax and d <= dmax, decide whether
    sigma_{G/H} induces an isomorphism H_d(C_S) -> H_d(C_{S+[G/H]}).

    Whenever d <= k/2 (k = number of [G/H] orbits in S) and the table maps of
    the H-stratum are isomorphisms through degree d, the assembled map must be
    an isomorphism; any exception is listed in ``failures``.
    """
    if not M.stabilizable(H):
        raise DomainError(f"M is not {M.label(H)}-stabilizable")
    T = M.table(H)
    asm = {d: CSGAssembler(M, d) for d in range(dmax + 1)}
    entries = []
    failures = []
    ks = set()
    for S in enumerate_gsets_upto(M.types, kmax):
        if not is_realizable(S, M):
            continue
        k = S.mult(H)
        ks.add(k)
        for d in range(dmax + 1):
            res = asm[d].stabilization(S, H)
            inputs_iso = all(T.is_iso(k, i) for i in range(d + 1))
            e = RangeEntry(S.label(), S.cardinality, k, d, res.is_isomorphism, 2 * d <= k, inputs_iso)
            entries.append(e)
            if e.in_range and e.inputs_iso and not e.iso:
                failures.append(e)
    violations = sorted((k, d) for k in ks for d in range(dmax + 1) if 2 * d <= k and not T.is_iso(k, d))
    return RangeReport(M.label(H), tuple(entries), tuple(violations), tuple(failures))


def synthetic_table(kmax: int, dmax: int, torsion: bool = True) -> HomologyTable:
    """Table whose stabilization maps are isomorphisms exactly when d <= k/2.

    In the stable range H_d(C_k) = Z (plus Z/2 for d >= 1 when ``torsion``)
    with identity maps; below it H_d(C_k) = Z^(2d-k+1) for k >= 1 and the maps
    drop the last coordinate.
    """
    entries, maps = {}, {}
    for k in range(kmax + 2):
        for d in range(dmax + 1):
            if k == 0:
                entries[(k, d)] = FgAbGroup(1) if d == 0 else FgAbGroup()
            elif k >= 2 * d:
                entries[(k, d)] = FgAbGroup(1, (2,) if torsion and d >= 1 else ())
            else:
                entries[(k, d)] = FgAbGroup(2 * d - k + 1)
    for k in range(kmax + 1):
        for d in range(dmax + 1):
            A, B = entries[(k, d)], entries[(k + 1, d)]
            F = zeros(B.ngens, A.ngens)
            for i in range(min(A.ngens, B.ngens)):
                F[i, i] = 1
            maps[(k, d)] = F
    return HomologyTable(entries, maps)


# The geometric module -----------------------------------------------------------------

def geometric_module(M: ManifoldDescriptor, d: int, bound: int) -> MultigradedModule:
    """The sum over realizable S with |S| <= bound of H_d(C_S^G(M)), with
    sigma_{G/H} acting for every H at which M is stabilizable."""
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    asm = CSGAssembler(M, d)
    grades = [S for n in range(bound + 1) for S in components_of_fixed_config(M, n)]
    grade_set = set(grades)
    pieces, names, labels, card = {}, {}, {}, {}
    for S in grades:
        A = homology_of_CSG(S, M, d)
        pieces[S] = Presentation.of_group(A)
        names[S] = S.label()
        card[S] = S.cardinality
        base = f"x[{S.label()}]"
        labels[S] = [base] if A.ngens == 1 else [f"{base}_{j}" for j in range(A.ngens)]
    ops = []
    for H in M.types.subgroups:
        if not M.stabilizable(H):
            continue
        orbit = M.types.orbit(H)
        maps = {}
        for S in grades:
            T = S + orbit
            if T not in grade_set:
                continue
            res = asm.stabilization(S, H)
            if res.source_group != homology_of_CSG(S, M, d) or res.target_group != homology_of_CSG(T, M, d):
                raise AssertionError("chain-level and Künneth homology disagree")
            maps[S] = (T, res.matrix)
        ops.append(Operator(H, f"sigma[{M.label(M.ambient)}/{M.label(H)}]", orbit.cardinality, maps))
    return MultigradedModule(grades, card, pieces, ops, bound, names, labels)
