"""Mackey functors with free abelian levels.

Level M(G/H) is Z^rank(H) with a named basis.  ``res[(H, K)]`` is the matrix of
res: M(G/K) -> M(G/H) and ``tr[(H, K)]`` that of tr: M(G/H) -> M(G/K), for
H <= K.  Weyl actions default to the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .groups import Element, FiniteAbelianGroup, SubgroupId, parse_subgroup, subgroup_label
from .gsets import OrbitTypes, induce_gset, restrict_gset
from .intlinalg import identity, matrix, to_lists, zeros


@dataclass
class MackeyFunctorData:
    group: FiniteAbelianGroup
    bases: dict[SubgroupId, list[str]]
    res: dict[tuple[SubgroupId, SubgroupId], np.ndarray]
    tr: dict[tuple[SubgroupId, SubgroupId], np.ndarray]
    weyl: dict[tuple[SubgroupId, Element], np.ndarray] = field(default_factory=dict)
    name: str = "custom"

    def rank(self, H: SubgroupId) -> int:
        return len(self.bases[H])

    def restriction(self, H: SubgroupId, K: SubgroupId) -> np.ndarray:
        if H == K:
            return self.res.get((H, K), identity(self.rank(H)))
        return self.res[(H, K)]

    def transfer(self, H: SubgroupId, K: SubgroupId) -> np.ndarray:
        if H == K:
            return self.tr.get((H, K), identity(self.rank(H)))
        return self.tr[(H, K)]

    def conjugation(self, H: SubgroupId, g: Element) -> np.ndarray:
        return self.weyl.get((H, g), identity(self.rank(H)))

    def to_json(self) -> dict:
        G = self.group
        subs = G.subgroups()
        return {
            "schema": "equistab.mackey/1",
            "name": self.name,
            "group": G.to_json(),
            "levels": [{"subgroup": H.to_json(), "label": subgroup_label(G, H), "basis": self.bases[H]}
                       for H in subs],
            "restrictions": [{"sub": H.to_json(), "sup": K.to_json(), "matrix": to_lists(self.restriction(H, K))}
                             for H in subs for K in subs if H < K],
            "transfers": [{"sub": H.to_json(), "sup": K.to_json(), "matrix": to_lists(self.transfer(H, K))}
                          for H in subs for K in subs if H < K],
        }


def constant_Z(G: FiniteAbelianGroup) -> MackeyFunctorData:
    """Z at every level, restriction the identity, transfer H <= K multiplication by [K:H]."""
    subs = G.subgroups()
    bases = {H: ["1"] for H in subs}
    res, tr = {}, {}
    for H in subs:
        for K in subs:
            if H <= K:
                res[(H, K)] = matrix([[1]])
                tr[(H, K)] = matrix([[K.order // H.order]])
    return MackeyFunctorData(G, bases, res, tr, name="Z")


def burnside_mackey(G: FiniteAbelianGroup) -> MackeyFunctorData:
    """Level H is the Burnside group A(H) on the orbits [H/L]; restriction and
    transfer are restriction and induction of H-sets."""
    subs = G.subgroups()
    types = {H: OrbitTypes.of(G, H) for H in subs}
    bases = {H: [f"[{subgroup_label(G, H)}/{subgroup_label(G, L)}]" for L in types[H].subgroups] for H in subs}
    res, tr = {}, {}
    for H in subs:
        for K in subs:
            if not H <= K:
                continue
            R = zeros(len(types[H].subgroups), len(types[K].subgroups))
            for j, L in enumerate(types[K].subgroups):
                R[:, j] = restrict_gset(types[K].orbit(L), H).mults
            T = zeros(len(types[K].subgroups), len(types[H].subgroups))
            for j, L in enumerate(types[H].subgroups):
                T[:, j] = induce_gset(types[H].orbit(L), K).mults
            res[(H, K)] = R
            tr[(H, K)] = T
    return MackeyFunctorData(G, bases, res, tr, name="A")


@dataclass(frozen=True)
class MackeyReport:
    ok: bool
    checks: int
    failure: str | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "failure": self.failure}


def _eq(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def verify_mackey_axioms(M: MackeyFunctorData) -> MackeyReport:
    """Check unit, functoriality, Weyl compatibility and the double coset
    formula res^K_L tr^K_H = sum over g in K/LH of tr^L_{L^H} c_g res^H_{L^H}."""
    G = M.group
    subs = G.subgroups()
    lab = lambda H: subgroup_label(G, H)
    checks = 0

    def fail(msg):
        return MackeyReport(False, checks, msg)

    for H in subs:
        if H not in M.bases:
            return fail(f"missing level at {lab(H)}")
    for H in subs:
        checks += 1
        if not _eq(M.restriction(H, H), identity(M.rank(H))):
            return fail(f"res({lab(H)}<={lab(H)}) is not the identity")
        if not _eq(M.transfer(H, H), identity(M.rank(H))):
            return fail(f"tr({lab(H)}<={lab(H)}) is not the identity")
        for K in subs:
            if H <= K:
                if M.restriction(H, K).shape != (M.rank(H), M.rank(K)):
                    return fail(f"res({lab(H)}<={lab(K)}) has wrong shape")
                if M.transfer(H, K).shape != (M.rank(K), M.rank(H)):
                    return fail(f"tr({lab(H)}<={lab(K)}) has wrong shape")
    for L in subs:
        for H in subs:
            for K in subs:
                if L <= H <= K:
                    checks += 1
                    if not _eq(M.restriction(L, H) @ M.restriction(H, K), M.restriction(L, K)):
                        return fail(f"res not functorial on {lab(L)}<={lab(H)}<={lab(K)}")
                    if not _eq(M.transfer(H, K) @ M.transfer(L, H), M.transfer(L, K)):
                        return fail(f"tr not functorial on {lab(L)}<={lab(H)}<={lab(K)}")
    for H in subs:
        I = identity(M.rank(H))
        for g in G.elements:
            checks += 1
            c = M.conjugation(H, g)
            if g in H and not _eq(c, I):
                return fail(f"element {g} of {lab(H)} acts nontrivially on its own level")
            for h in G.elements:
                if not _eq(c @ M.conjugation(H, h), M.conjugation(H, G.add(g, h))):
                    return fail(f"Weyl action at {lab(H)} is not an action ({g}, {h})")
        for K in subs:
            if H <= K:
                for g in G.elements:
                    if not _eq(M.restriction(H, K) @ M.conjugation(K, g), M.conjugation(H, g) @ M.restriction(H, K)):
                        return fail(f"res({lab(H)}<={lab(K)}) not Weyl equivariant at {g}")
                    if not _eq(M.transfer(H, K) @ M.conjugation(H, g), M.conjugation(K, g) @ M.transfer(H, K)):
                        return fail(f"tr({lab(H)}<={lab(K)}) not Weyl equivariant at {g}")
    for K in subs:
        for H in subs:
            if not H <= K:
                continue
            for L in subs:
                if not L <= K:
                    continue
                checks += 1
                LH = G.join(L, H)
                LnH = G.meet(L, H)
                lhs = M.restriction(L, K) @ M.transfer(H, K)
                rhs = zeros(M.rank(L), M.rank(H))
                reps = [g for g in G.cosets(LH) if g in K]
                for g in reps:
                    rhs = rhs + M.transfer(LnH, L) @ M.conjugation(LnH, g) @ M.restriction(LnH, H)
                if not _eq(lhs, rhs):
                    return fail(f"double coset formula fails for res({lab(L)}<={lab(K)}) tr({lab(H)}<={lab(K)})")
    return MackeyReport(True, checks)


def parse_mackey(data) -> MackeyFunctorData:
    """Read custom Mackey data; pairs H < K that are omitted are filled in by
    composing along a chain of minimal inclusions, and everything is then
    validated by :func:`verify_mackey_axioms`."""
    from .groups import parse_group

    if not isinstance(data, dict):
        raise ValidationError("Mackey data must be a JSON object")
    G = parse_group(data.get("group"))
    subs = G.subgroups()
    bases = {}
    for entry in data.get("levels", []):
        H = parse_subgroup(G, entry["subgroup"])
        if "basis" in entry:
            bases[H] = [str(b) for b in entry["basis"]]
        else:
            bases[H] = [f"e{i}" for i in range(int(entry["rank"]))]
    for H in subs:
        if H not in bases:
            raise ValidationError(f"missing level for subgroup {subgroup_label(G, H)}")

    def read_pairs(key, transpose):
        out = {}
        for entry in data.get(key, []):
            H = parse_subgroup(G, entry["sub"])
            K = parse_subgroup(G, entry["sup"])
            if not H <= K:
                raise ValidationError(f"{key} entry with sub not contained in sup")
            shape = (len(bases[K]), len(bases[H])) if transpose else (len(bases[H]), len(bases[K]))
            out[(H, K)] = matrix(entry["matrix"], shape=shape)
        return out

    res = read_pairs("restrictions", transpose=False)
    tr = read_pairs("transfers", transpose=True)
    for H in subs:
        res.setdefault((H, H), identity(len(bases[H])))
        tr.setdefault((H, H), identity(len(bases[H])))
    for size_gap in range(1, len(subs)):
        for H in subs:
            for K in subs:
                if H < K and ((H, K) not in res or (H, K) not in tr):
                    mids = [L for L in subs if H < L < K and (H, L) in res and (L, K) in res
                            and (H, L) in tr and (L, K) in tr]
                    if mids:
                        L = mids[0]
                        res.setdefault((H, K), res[(H, L)] @ res[(L, K)])
                        tr.setdefault((H, K), tr[(L, K)] @ tr[(H, L)])
    for H in subs:
        for K in subs:
            if H < K and ((H, K) not in res or (H, K) not in tr):
                raise ValidationError(f"no restriction/transfer data for {subgroup_label(G, H)} <= {subgroup_label(G, K)}")
    weyl = {}
    for entry in data.get("weyl", []):
        H = parse_subgroup(G, entry["subgroup"])
        g = G.element(entry["element"])
        weyl[(H, g)] = matrix(entry["matrix"], shape=(len(bases[H]), len(bases[H])))
    M = MackeyFunctorData(G, bases, res, tr, weyl, name=str(data.get("name", "custom")))
    report = verify_mackey_axioms(M)
    if not report.ok:
        raise ValidationError(f"Mackey axioms fail: {report.failure}")
    return M
