"""Finite G-CW complexes and their cellular Bredon chains.

A G-cell of dimension n with isotropy H is an orbit G/H x D^n.  A boundary
term from an n-cell e to an (n-1)-cell f carries a coset element g (the orbit
map G/H_e -> G/H_f, xH_e -> xgH_f, which needs H_e <= H_f) and an integer
coefficient.  Tensoring over the orbit category collapses the chains onto one
copy of M(G/H_e) per cell, with differential blocks coeff * c_g * tr.
"""
from __future__ import annotations

from dataclasses import dataclass, field


from .errors import DomainError, ValidationError
from .groups import Element, FiniteAbelianGroup, SubgroupId, parse_group, parse_subgroup, subgroup_label
from .intlinalg import FgAbGroup, IntChainComplex, homology, zeros
from .mackey import MackeyFunctorData, constant_Z


@dataclass(frozen=True)
class Cell:
    dim: int
    isotropy: SubgroupId
    name: str = ""


@dataclass(frozen=True)
class BoundaryTerm:
    source: int
    target: int
    coset: Element
    coeff: int


@dataclass
class GCWComplex:
    group: FiniteAbelianGroup
    cells: list[Cell]
    boundary: list[BoundaryTerm] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_in_dim(self, n: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == n]

    def check_terms(self) -> None:
        G = self.group
        for t in self.boundary:
            if not (0 <= t.source < len(self.cells) and 0 <= t.target < len(self.cells)):
                raise ValidationError(f"boundary term {t} refers to a missing cell")
            e, f = self.cells[t.source], self.cells[t.target]
            if e.dim != f.dim + 1:
                raise ValidationError(f"boundary term from a {e.dim}-cell to a {f.dim}-cell")
            if not e.isotropy <= f.isotropy:
                raise ValidationError(
                    f"boundary term {t.source}->{t.target}: isotropy {subgroup_label(G, e.isotropy)} "
                    f"is not contained in {subgroup_label(G, f.isotropy)}")
            G.element(t.coset)

    def validate(self) -> None:
        """Terms well formed and d^2 = 0 equivariantly (constant Z) and on every fixed-point subcomplex."""
        self.check_terms()
        C = assemble_bredon_complex(self, constant_Z(self.group), validate=False)
        bad = C.squares_to_zero()
        if bad:
            raise ValidationError(f"d^2 != 0 in the Bredon complex in degrees {bad[0]}->{bad[0] - 2}")
        for K in self.group.subgroups():
            FP = fixed_point_complex(self, K, validate=False)
            bad = FP.chains.squares_to_zero()
            if bad:
                raise ValidationError(
                    f"d^2 != 0 on the {subgroup_label(self.group, K)}-fixed points in degrees {bad[0]}->{bad[0] - 2}")

    def relabeled(self, perm: list[int]) -> "GCWComplex":
        """Same complex with cell i moved to position perm[i]."""
        cells = [None] * len(self.cells)
        for i, c in enumerate(self.cells):
            cells[perm[i]] = c
        terms = [BoundaryTerm(perm[t.source], perm[t.target], t.coset, t.coeff) for t in self.boundary]
        return GCWComplex(self.group, cells, terms)

    def to_json(self) -> dict:
        return {
            "schema": "equistab.gcw/1",
            "group": self.group.to_json(),
            "cells": [{"dim": c.dim, "isotropy": c.isotropy.to_json(), **({"name": c.name} if c.name else {})}
                      for c in self.cells],
            "boundary": [{"from": t.source, "to": t.target, "coset": list(t.coset), "coeff": t.coeff}
                         for t in self.boundary],
        }


def _positions(X: GCWComplex, rank_of) -> tuple[list[int], dict[int, int]]:
    """Per-degree ranks and the offset of each cell inside its degree."""
    ranks = [0] * (X.dimension + 1)
    offset = {}
    for i, c in enumerate(X.cells):
        offset[i] = ranks[c.dim]
        ranks[c.dim] += rank_of(c)
    return ranks, offset


def assemble_bredon_complex(X: GCWComplex, M: MackeyFunctorData, validate: bool = True) -> IntChainComplex:
    """C_n = sum over n-cells e of M(G/H_e); block e -> f is coeff * c_g * tr(H_e <= H_f)."""
    if validate:
        X.validate()
    else:
        X.check_terms()
    if M.group != X.group:
        raise DomainError("coefficient system and complex are over different groups")
    ranks, offset = _positions(X, lambda c: M.rank(c.isotropy))
    mats = {n: zeros(ranks[n - 1], ranks[n]) for n in range(1, len(ranks))}
    for t in X.boundary:
        e, f = X.cells[t.source], X.cells[t.target]
        block = t.coeff * (M.conjugation(f.isotropy, t.coset) @ M.transfer(e.isotropy, f.isotropy))
        r0, c0 = offset[t.target], offset[t.source]
        D = mats[e.dim]
        D[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] += block
    C = IntChainComplex(ranks, mats)
    if validate:
        C.validate()
    return C


def bredon_homology(X: GCWComplex, M: MackeyFunctorData) -> list[FgAbGroup]:
    return homology(assemble_bredon_complex(X, M))


@dataclass
class FixedPointComplex:
    chains: IntChainComplex
    labels: list[tuple[int, Element]]  # (G-cell index, coset representative) per nonequivariant cell

    def homology(self) -> list[FgAbGroup]:
        return homology(self.chains)


def fixed_point_complex(X: GCWComplex, K: SubgroupId, validate: bool = True) -> FixedPointComplex:
    """Cellular chains of X^K: every G-cell with isotropy H >= K contributes its
    [G:H] translates; boundaries are expanded through coset representatives."""
    G = X.group
    G.check_subgroup(K)
    if validate:
        X.validate()
    index = {}
    labels_by_dim: dict[int, list] = {}
    for i, c in enumerate(X.cells):
        if K <= c.isotropy:
            for rep in G.cosets(c.isotropy):
                lst = labels_by_dim.setdefault(c.dim, [])
                index[(i, rep)] = len(lst)
                lst.append((i, rep))
    top = X.dimension
    ranks = [len(labels_by_dim.get(n, [])) for n in range(top + 1)]
    mats = {n: zeros(ranks[n - 1], ranks[n]) for n in range(1, top + 1)}
    for t in X.boundary:
        e, f = X.cells[t.source], X.cells[t.target]
        if not K <= e.isotropy:
            continue
        for rep in G.cosets(e.isotropy):
            tgt = G.coset_rep(G.add(rep, t.coset), f.isotropy)
            mats[e.dim][index[(t.target, tgt)], index[(t.source, rep)]] += t.coeff
    labels = [lab for n in range(top + 1) for lab in labels_by_dim.get(n, [])]
    return FixedPointComplex(IntChainComplex(ranks if ranks else [0], mats), labels)


def parse_gcw(data) -> GCWComplex:
    if not isinstance(data, dict):
        raise ValidationError("G-CW complex must be a JSON object")
    G = parse_group(data.get("group", {"invariant_factors": []}))
    cells = []
    for entry in data.get("cells", []):
        if not isinstance(entry, dict) or "dim" not in entry:
            raise ValidationError(f"bad cell entry {entry!r}")
        dim = int(entry["dim"])
        if dim < 0:
            raise ValidationError("negative cell dimension")
        cells.append(Cell(dim, parse_subgroup(G, entry.get("isotropy", "G")), str(entry.get("name", ""))))
    terms = []
    for entry in data.get("boundary", []):
        try:
            terms.append(BoundaryTerm(int(entry["from"]), int(entry["to"]),
                                      G.element(entry.get("coset", G.identity)), int(entry.get("coeff", 1))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad boundary entry {entry!r}") from exc
    X = GCWComplex(G, cells, terms)
    X.validate()
    return X


# Small standard complexes -------------------------------------------------

def point(G: FiniteAbelianGroup) -> GCWComplex:
    return GCWComplex(G, [Cell(0, G.whole, "pt")])


def free_orbit(G: FiniteAbelianGroup) -> GCWComplex:
    return GCWComplex(G, [Cell(0, G.trivial, "G/e")])


def sign_sphere() -> GCWComplex:
    """S^sigma for C_2: fixed 0-cells a, b and a free 1-cell orbit with d = b - a."""
    G = FiniteAbelianGroup((2,))
    cells = [Cell(0, G.whole, "a"), Cell(0, G.whole, "b"), Cell(1, G.trivial, "arc")]
    return GCWComplex(G, cells, [BoundaryTerm(2, 1, (0,), 1), BoundaryTerm(2, 0, (0,), -1)])


def sign_disk() -> GCWComplex:
    """D(sigma) for C_2: fixed centre m, free boundary orbit p, free 1-cell orbit with d = p - m."""
    G = FiniteAbelianGroup((2,))
    cells = [Cell(0, G.whole, "m"), Cell(0, G.trivial, "p"), Cell(1, G.trivial, "half")]
    return GCWComplex(G, cells, [BoundaryTerm(2, 1, (0,), 1), BoundaryTerm(2, 0, (0,), -1)])
