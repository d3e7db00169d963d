"""Künneth formula for finitely generated abelian groups, and explicit
minimal chain models used to compute maps between tensor products exactly."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..intlinalg import FgAbGroup, IntChainComplex, zeros


def tensor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    orders = [t for t in A.torsion for _ in range(B.free)]
    orders += [t for t in B.torsion for _ in range(A.free)]
    orders += [gcd(s, t) for s in A.torsion for t in B.torsion]
    return FgAbGroup.from_orders(A.free * B.free, orders)


def tor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    return FgAbGroup.from_orders(0, [gcd(s, t) for s in A.torsion for t in B.torsion])


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    return FgAbGroup.from_orders(sum(g.free for g in groups), [t for g in groups for t in g.torsion])


def kunneth(A: Sequence[FgAbGroup], B: Sequence[FgAbGroup], d: int) -> FgAbGroup:
    """H_d of a product from the graded homologies A and B of the factors."""
    if d < 0:
        raise DomainError("negative degree")
    if len(A) <= d or len(B) <= d:
        raise DomainError(f"gradings cover degrees up to {min(len(A), len(B)) - 1}, need {d}")
    parts = [tensor(A[i], B[d - i]) for i in range(d + 1)]
    parts += [tor(A[i], B[d - 1 - i]) for i in range(d)]
    return direct_sum(parts)


def kunneth_all(A: Sequence[FgAbGroup], B: Sequence[FgAbGroup], dmax: int) -> list[FgAbGroup]:
    return [kunneth(A, B, d) for d in range(dmax + 1)]


# Chain models -------------------------------------------------------------------

@dataclass
class ChainModel:
    """Minimal free complex with prescribed homology in degrees 0..top.

    Each free generator of H_i is a cycle a in degree i; each torsion generator
    of order t is a cycle a in degree i with a partner b in degree i + 1,
    d b = t a.  ``a_pos[i][j]`` / ``b_pos[i][j]`` locate these generators.
    """

    groups: list[FgAbGroup]
    complex: IntChainComplex
    a_pos: list[list[int]]
    b_pos: list[dict[int, int]]  # torsion index j (canonical coordinate) -> position in degree i + 1

    @property
    def top(self) -> int:
        return len(self.groups) - 1


def chain_model(groups: Sequence[FgAbGroup]) -> ChainModel:
    top = len(groups) - 1
    ranks = [0] * (top + 2)
    a_pos: list[list[int]] = []
    b_pos: list[dict[int, int]] = []
    for i, A in enumerate(groups):
        a_pos.append(list(range(ranks[i], ranks[i] + A.ngens)))
        ranks[i] += A.ngens
    for i, A in enumerate(groups):
        pos = {}
        for j in range(A.free, A.ngens):
            pos[j] = ranks[i + 1]
            ranks[i + 1] += 1
        b_pos.append(pos)
    mats = {n: zeros(ranks[n - 1], ranks[n]) for n in range(1, top + 2)}
    for i, A in enumerate(groups):
        for j, p in b_pos[i].items():
            mats[i + 1][a_pos[i][j], p] = A.moduli[j]
    return ChainModel(list(groups), IntChainComplex(ranks, mats), a_pos, b_pos)


def lift_map(src: ChainModel, tgt: ChainModel, maps: Sequence[np.ndarray]) -> dict[int, np.ndarray]:
    """Chain map between models inducing ``maps[i]`` on H_i (canonical coordinates).

    Torsion partners are sent to the unique combination of target partners
    compatible with the boundary, which exists exactly when the homology maps
    are well defined.
    """
    top = src.top
    C, D = src.complex, tgt.complex
    out = {n: zeros(D.rank_at(n), C.rank_at(n)) for n in range(top + 2)}
    for i in range(top + 1):
        F = maps[i]
        A, B = src.groups[i], tgt.groups[i]
        for j in range(A.ngens):
            for l in range(B.ngens):
                out[i][tgt.a_pos[i][l], src.a_pos[i][j]] = F[l, j]
        for j, p in src.b_pos[i].items():
            t = A.moduli[j]
            for l in range(B.ngens):
                val = t * F[l, j]
                if l < B.free:
                    if val:
                        raise DomainError("homology map sends torsion to a free class")
                    continue
                s = B.moduli[l]
                if val % s:
                    raise DomainError("homology map is not well defined on torsion")
                out[i + 1][tgt.b_pos[i][l], p] = val // s
    return out


@dataclass
class TensorComplex:
    complex: IntChainComplex
    offsets: dict[tuple[int, int], int]  # (i, j) -> start of C_i (x) D_j inside degree i + j


def tensor_complex(C: IntChainComplex, D: IntChainComplex, top: int) -> TensorComplex:
    """(C (x) D)_n for n <= top with d(x (x) y) = dx (x) y + (-1)^i x (x) dy."""
    ranks = []
    offsets = {}
    for n in range(top + 1):
        r = 0
        for i in range(n + 1):
            offsets[(i, n - i)] = r
            r += C.rank_at(i) * D.rank_at(n - i)
        ranks.append(r)
    mats = {}
    for n in range(1, top + 1):
        M = zeros(ranks[n - 1], ranks[n])
        for i in range(n + 1):
            j = n - i
            ci, dj = C.rank_at(i), D.rank_at(j)
            if not ci or not dj:
                continue
            col0 = offsets[(i, j)]
            if i >= 1 and C.rank_at(i - 1):
                row0 = offsets[(i - 1, j)]
                block = np.kron(C.d(i), _eye(dj))
                M[row0:row0 + block.shape[0], col0:col0 + block.shape[1]] += block
            if j >= 1 and D.rank_at(j - 1):
                row0 = offsets[(i, j - 1)]
                block = np.kron(_eye(ci), D.d(j)) * (-1 if i % 2 else 1)
                M[row0:row0 + block.shape[0], col0:col0 + block.shape[1]] += block
        mats[n] = M
    return TensorComplex(IntChainComplex(ranks, mats), offsets)


def tensor_chain_map(f: dict[int, np.ndarray], g: dict[int, np.ndarray], src: TensorComplex,
                     tgt: TensorComplex, top: int) -> dict[int, np.ndarray]:
    out = {}
    for n in range(top + 1):
        M = zeros(tgt.complex.rank_at(n), src.complex.rank_at(n))
        for i in range(n + 1):
            j = n - i
            if f[i].size == 0 or g[j].size == 0:
                continue
            block = np.kron(f[i], g[j])
            r0, c0 = tgt.offsets[(i, j)], src.offsets[(i, j)]
            M[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] = block
        out[n] = M
    return out


def _eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out
