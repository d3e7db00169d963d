"""Exact integer linear algebra: Smith normal form, finitely generated abelian
groups, presentations, homomorphism tests and chain complex homology.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so every
computation is exact with arbitrary precision.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ValidationError


def matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an exact integer matrix. ``shape`` is required for empty input."""
    if isinstance(rows, np.ndarray):
        out = rows.astype(object)
    else:
        rows = [list(r) for r in rows]
        if not rows:
            if shape is None:
                raise ValueError("shape required for an empty matrix")
            return np.zeros(shape, dtype=object) * 0
        out = np.array(rows, dtype=object)
        if out.ndim != 2:
            raise ValidationError("ragged matrix")
    out = np.array([[int(x) for x in r] for r in out], dtype=object).reshape(out.shape)
    if shape is not None and out.shape != tuple(shape):
        raise ValidationError(f"matrix shape {out.shape} != expected {tuple(shape)}")
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def column(values: Sequence[int]) -> np.ndarray:
    out = zeros(len(values), 1)
    for i, v in enumerate(values):
        out[i, 0] = int(v)
    return out


def hstack(blocks: Sequence[np.ndarray], nrows: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return zeros(nrows, 0)
    for b in blocks:
        if b.shape[0] != nrows:
            raise ValidationError("row count mismatch in hstack")
    return np.concatenate(blocks, axis=1)


_INT64_SAFE = 2 ** 62


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product of integer matrices; uses machine integers when the
    entries are small enough that no intermediate sum can overflow."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0], B.shape[1])
    bound = _max_abs(A) * _max_abs(B) * A.shape[1]
    if bound < _INT64_SAFE:
        return (A.astype(np.int64) @ B.astype(np.int64)).astype(object)
    return A @ B


def to_lists(a: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in a]


@dataclass
class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ A @ V`` is diagonal.

    ``diagonal`` holds the nonzero diagonal entries s_1 | s_2 | ... (all
    positive); its length is the rank of ``A``.
    """

    shape: tuple[int, int]
    diagonal: list[int]
    U: np.ndarray | None = None
    V: np.ndarray | None = None
    U_inv: np.ndarray | None = None
    V_inv: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diagonal_matrix(self) -> np.ndarray:
        D = zeros(*self.shape)
        for i, s in enumerate(self.diagonal):
            D[i, i] = s
        return D


def _smallest_nonzero(D: np.ndarray, t: int) -> tuple[int, int] | None:
    sub = D[t:, t:]
    if sub.size == 0:
        return None
    units = np.argwhere((sub == 1) | (sub == -1))
    if len(units):
        return t + int(units[0][0]), t + int(units[0][1])
    nz = np.argwhere(sub != 0)
    if not len(nz):
        return None
    best = min(nz, key=lambda ij: abs(sub[ij[0], ij[1]]))
    return t + int(best[0]), t + int(best[1])


def smith_normal_form(A, transforms: bool = True, right: bool = True) -> SmithForm:
    """Smith normal form over the integers.

    Pivots on the entry of smallest magnitude, which keeps coefficients small
    on the sparse matrices that arise here. With ``transforms`` the unimodular
    ``U``, ``V`` and their inverses are tracked so that ``U @ A @ V = D``;
    ``right=False`` skips ``V`` and ``V_inv`` (left as None).
    """
    D = matrix(A) if not isinstance(A, np.ndarray) else A.astype(object).copy()
    m, n = D.shape
    U = U_inv = V = V_inv = None
    if transforms:
        U, U_inv = identity(m), identity(m)
        if right:
            V, V_inv = identity(n), identity(n)
    track_right = transforms and right

    def row_add(i, j, c):  # row i += c * row j
        D[i] = D[i] + c * D[j]
        if transforms:
            U[i] = U[i] + c * U[j]
            U_inv[:, j] = U_inv[:, j] - c * U_inv[:, i]

    def col_add(i, j, c):  # col i += c * col j
        D[:, i] = D[:, i] + c * D[:, j]
        if track_right:
            V[:, i] = V[:, i] + c * V[:, j]
            V_inv[j] = V_inv[j] - c * V_inv[i]

    def row_swap(i, j):
        if i == j:
            return
        D[[i, j]] = D[[j, i]]
        if transforms:
            U[[i, j]] = U[[j, i]]
            U_inv[:, [i, j]] = U_inv[:, [j, i]]

    def col_swap(i, j):
        if i == j:
            return
        D[:, [i, j]] = D[:, [j, i]]
        if track_right:
            V[:, [i, j]] = V[:, [j, i]]
            V_inv[[i, j]] = V_inv[[j, i]]

    def row_negate(i):
        D[i] = -D[i]
        if transforms:
            U[i] = -U[i]
            U_inv[:, i] = -U_inv[:, i]

    diagonal = []
    t = 0
    while t < min(m, n):
        pos = _smallest_nonzero(D, t)
        if pos is None:
            break
        row_swap(t, pos[0])
        col_swap(t, pos[1])
        while True:
            p = D[t, t]
            for i in np.flatnonzero(D[t + 1:, t] != 0):
                i = t + 1 + int(i)
                row_add(i, t, -(D[i, t] // p))
            for j in np.flatnonzero(D[t, t + 1:] != 0):
                j = t + 1 + int(j)
                col_add(j, t, -(D[t, j] // p))
            # leftover remainders are smaller than the pivot: move one in
            best = None
            for i in np.flatnonzero(D[t + 1:, t] != 0):
                i = t + 1 + int(i)
                if best is None or abs(D[i, t]) < abs(D[best[0], best[1]]):
                    best = (i, t)
            for j in np.flatnonzero(D[t, t + 1:] != 0):
                j = t + 1 + int(j)
                if best is None or abs(D[t, j]) < abs(D[best[0], best[1]]):
                    best = (t, j)
            if best is not None:
                if best[1] == t:
                    row_swap(t, best[0])
                else:
                    col_swap(t, best[1])
                continue
            p = D[t, t]
            bad = None
            if p not in (1, -1) and t + 1 < m and t + 1 < n:
                rows = np.argwhere((D[t + 1:, t + 1:] % p) != 0)
                if len(rows):
                    bad = t + 1 + int(rows[0][0])
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t, t] < 0:
            row_negate(t)
        diagonal.append(int(D[t, t]))
        t += 1
    if transforms:
        return SmithForm((m, n), diagonal, U, V, U_inv, V_inv)
    return SmithForm((m, n), diagonal)


def invariant_factors(A) -> list[int]:
    """Nonzero Smith diagonal of ``A`` (includes 1s)."""
    return smith_normal_form(A, transforms=False).diagonal


def rank(A) -> int:
    return smith_normal_form(A, transforms=False).rank


@dataclass(frozen=True)
class FgAbGroup:
    """Z^free + Z/t_1 + ... + Z/t_k with t_1 | ... | t_k, each t_i >= 2.

    Canonical coordinates list the free generators first, then the torsion
    generators in the order of ``torsion``.
    """

    free: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free < 0:
            raise ValidationError("negative free rank")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValidationError(f"invariant factor {t} < 2")
            if i and t % self.torsion[i - 1]:
                raise ValidationError(f"invariant factors {self.torsion} do not form a divisor chain")

    @classmethod
    def from_orders(cls, free: int, orders: Iterable[int]) -> "FgAbGroup":
        """Canonicalize Z^free + (+) Z/o_i for arbitrary cyclic orders o_i >= 1."""
        orders = [int(o) for o in orders if int(o) != 1]
        if any(o <= 0 for o in orders):
            raise ValidationError("cyclic orders must be positive")
        if not orders:
            return cls(free, ())
        diag = invariant_factors(np.diag(np.array(orders, dtype=object)).astype(object))
        return cls(free, tuple(s for s in diag if s > 1))

    @property
    def ngens(self) -> int:
        return self.free + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Modulus of each canonical coordinate (0 for free coordinates)."""
        return (0,) * self.free + self.torsion

    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion

    def relations(self) -> np.ndarray:
        R = zeros(self.ngens, len(self.torsion))
        for j, t in enumerate(self.torsion):
            R[self.free + j, j] = t
        return R

    def reduce(self, coords: np.ndarray) -> np.ndarray:
        out = coords.copy()
        for i, mod in enumerate(self.moduli):
            if mod:
                out[i] = out[i] % mod
        return out

    def order(self) -> int | None:
        if self.free:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = []
        if self.free == 1:
            parts.append("Z")
        elif self.free > 1:
            parts.append(f"Z^{self.free}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free": self.free, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data) -> "FgAbGroup":
        if isinstance(data, dict):
            return cls.from_orders(int(data.get("free", 0)), data.get("torsion", []))
        raise ValidationError(f"cannot read abelian group from {data!r}")


@dataclass
class Presentation:
    """The abelian group Z^ngens / (column span of ``relations``)."""

    ngens: int
    relations: np.ndarray
    _canon: "CanonicalBasis | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.relations.shape[0] != self.ngens:
            raise ValidationError("relation matrix has wrong row count")

    @classmethod
    def free(cls, n: int) -> "Presentation":
        return cls(n, zeros(n, 0))

    @classmethod
    def of_group(cls, group: FgAbGroup) -> "Presentation":
        return cls(group.ngens, group.relations())

    def canonical(self) -> "CanonicalBasis":
        if self._canon is None:
            self._canon = canonical_basis(self.ngens, self.relations)
        return self._canon

    def group(self) -> FgAbGroup:
        return self.canonical().group


@dataclass
class CanonicalBasis:
    """Change of coordinates from a presentation to canonical form.

    ``to_canon`` maps generator coordinates to canonical coordinates (reduce
    torsion entries afterwards); ``from_canon`` has as columns generator-space
    lifts of the canonical generators.
    """

    group: FgAbGroup
    to_canon: np.ndarray
    from_canon: np.ndarray

    def coords(self, x: np.ndarray) -> np.ndarray:
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        return self.group.reduce(self.to_canon @ x)

    def is_zero(self, x: np.ndarray) -> bool:
        """Whether every column of ``x`` vanishes in the quotient."""
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.shape[1] == 0 or self.group.ngens == 0:
            return True
        y = matmul(self.to_canon, x)
        for i, mod in enumerate(self.group.moduli):
            row = y[i]
            if mod:
                if (row % mod != 0).any():
                    return False
            elif (row != 0).any():
                return False
        return True


def _eliminate_units(ngens: int, relations: np.ndarray):
    """Sparse elimination of generators through relations with a unit entry.

    Returns ``(kept, steps, rest)``: surviving generator indices, the list of
    eliminations ``(g, expr)`` meaning x_g = sum expr[r] x_r in the quotient
    (in order), and the remaining relations as sparse dicts over kept gens.
    """
    cols = []
    for j in range(relations.shape[1]):
        col = {int(i): int(relations[i, j]) for i in np.flatnonzero(relations[:, j] != 0)}
        if col:
            cols.append(col)
    where: dict[int, set[int]] = {}
    for j, col in enumerate(cols):
        for i in col:
            where.setdefault(i, set()).add(j)
    alive = set(range(len(cols)))
    steps = []
    eliminated = set()
    while True:
        pick = None
        for j in sorted(alive):
            col = cols[j]
            units = [i for i, v in col.items() if v in (1, -1)]
            if units:
                g = min(units, key=lambda i: (len(where.get(i, ())), i))
                pick = (j, g)
                break
        if pick is None:
            break
        j, g = pick
        col = cols[j]
        u = col[g]
        expr = {r: -u * v for r, v in col.items() if r != g}
        steps.append((g, expr))
        eliminated.add(g)
        alive.discard(j)
        for r in col:
            where[r].discard(j)
        for k in sorted(where.get(g, set())):
            other = cols[k]
            c = other.pop(g)
            where[g].discard(k)
            for r, v in expr.items():
                nv = other.get(r, 0) + c * v
                if nv:
                    if r not in other:
                        where.setdefault(r, set()).add(k)
                    other[r] = nv
                elif r in other:
                    del other[r]
                    where[r].discard(k)
            if not other:
                alive.discard(k)
    kept = [i for i in range(ngens) if i not in eliminated]
    rest = [cols[j] for j in sorted(alive) if cols[j]]
    return kept, steps, rest


def canonical_basis(ngens: int, relations: np.ndarray) -> CanonicalBasis:
    """Canonical coordinates for Z^ngens / span(relations).

    Relations with a unit coefficient are used first to eliminate generators
    sparsely; Smith normal form is run on whatever remains.
    """
    kept, steps, rest = _eliminate_units(ngens, relations)
    seen = set()
    unique = []
    for col in rest:
        key = tuple(sorted(col.items()))
        neg = tuple((r, -v) for r, v in key)
        if key not in seen and neg not in seen:
            seen.add(key)
            unique.append(col)
    rest = unique
    pos = {g: i for i, g in enumerate(kept)}
    # reduce: original coordinates -> kept coordinates
    R = zeros(len(kept), ngens)
    for i, g in enumerate(kept):
        R[i, g] = 1
    value = {g: {g: 1} for g in kept}  # each original generator as a combination of kept ones
    for g, expr in reversed(steps):
        comb: dict[int, int] = {}
        for r, v in expr.items():
            for q, w in value[r].items():
                comb[q] = comb.get(q, 0) + v * w
        value[g] = comb
    for g, comb in value.items():
        for q, w in comb.items():
            if g not in pos:
                R[pos[q], g] += w
    small = zeros(len(kept), len(rest))
    for j, col in enumerate(rest):
        for r, v in col.items():
            small[pos[r], j] = v
    snf = smith_normal_form(small, right=False)
    keep_tors = [i for i, s in enumerate(snf.diagonal) if s > 1]
    free_rows = list(range(snf.rank, len(kept)))
    rows = free_rows + keep_tors
    group = FgAbGroup(len(free_rows), tuple(snf.diagonal[i] for i in keep_tors))
    to_small = snf.U[rows, :].reshape(len(rows), len(kept)) if rows else zeros(0, len(kept))
    lifts = snf.U_inv[:, rows].reshape(len(kept), len(rows)) if rows else zeros(len(kept), 0)
    embed = zeros(ngens, len(kept))
    for i, g in enumerate(kept):
        embed[g, i] = 1
    return CanonicalBasis(group, (to_small @ R).reshape(len(rows), ngens), (embed @ lifts).reshape(ngens, len(rows)))


class Lattice:
    """Column span of an integer matrix, with exact membership tests."""

    def __init__(self, columns: np.ndarray):
        self.dim = columns.shape[0]
        self.snf = smith_normal_form(columns)

    def contains(self, v: np.ndarray) -> bool:
        v = v.reshape(-1)
        w = self.snf.U @ v
        for i, x in enumerate(w):
            if i < self.snf.rank:
                if x % self.snf.diagonal[i]:
                    return False
            elif x:
                return False
        return True

    def contains_all(self, M: np.ndarray) -> bool:
        return all(self.contains(M[:, j]) for j in range(M.shape[1]))

    def is_everything(self) -> bool:
        return self.snf.rank == self.dim and all(s == 1 for s in self.snf.diagonal)


def integer_kernel(A: np.ndarray) -> np.ndarray:
    """Basis (as columns) of the integer kernel of ``A``; saturated in Z^n."""
    snf = smith_normal_form(A)
    n = A.shape[1]
    return snf.V[:, snf.rank:].reshape(n, n - snf.rank)


def cokernel(target: Presentation, images: np.ndarray) -> Presentation:
    """target / (span of the columns of ``images``)."""
    return Presentation(target.ngens, hstack([target.relations, images], target.ngens))


@dataclass(frozen=True)
class HomReport:
    well_defined: bool
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.well_defined and self.injective and self.surjective


def analyze_hom(F: np.ndarray, source: Presentation, target: Presentation) -> HomReport:
    """Decide well-definedness, injectivity and surjectivity of the map
    induced by ``F`` (target gens x source gens) on presented groups."""
    if F.shape != (target.ngens, source.ngens):
        raise ValidationError(f"map shape {F.shape} incompatible with groups")
    rel_t = Lattice(target.relations)
    well_defined = rel_t.contains_all(F @ source.relations) if source.relations.shape[1] else True
    surjective = Lattice(hstack([F, target.relations], target.ngens)).is_everything() if target.ngens else True
    if source.ngens == 0:
        injective = True
    else:
        joint = hstack([F, target.relations], target.ngens)
        if joint.shape[0] == 0:
            ker = identity(source.ngens)
        else:
            ker = integer_kernel(joint)[: source.ngens, :]
        injective = Lattice(source.relations).contains_all(ker) if ker.shape[1] else True
    return HomReport(well_defined, injective, surjective)


def is_isomorphism(F: np.ndarray, source: FgAbGroup, target: FgAbGroup) -> bool:
    return analyze_hom(F, Presentation.of_group(source), Presentation.of_group(target)).isomorphism


@dataclass
class IntChainComplex:
    """Free chain complex: ``ranks[n]`` = rank of C_n, ``boundaries[n]`` is
    the matrix of d_n : C_n -> C_{n-1} (shape ranks[n-1] x ranks[n]) for n >= 1."""

    ranks: list[int]
    boundaries: dict[int, np.ndarray]

    def __post_init__(self):
        for n in range(1, len(self.ranks)):
            d = self.boundaries.get(n)
            if d is None:
                self.boundaries[n] = zeros(self.ranks[n - 1], self.ranks[n])
            elif d.shape != (self.ranks[n - 1], self.ranks[n]):
                raise ValidationError(f"boundary d_{n} has shape {d.shape}, expected {(self.ranks[n - 1], self.ranks[n])}")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, n: int) -> np.ndarray:
        if n <= 0 or n > self.top:
            lo = self.ranks[n - 1] if 0 < n <= self.top + 1 else 0
            hi = self.ranks[n] if 0 <= n <= self.top else 0
            return zeros(lo, hi)
        return self.boundaries[n]

    def rank_at(self, n: int) -> int:
        return self.ranks[n] if 0 <= n <= self.top else 0

    def squares_to_zero(self) -> list[int]:
        """Degrees n with d_{n-1} d_n != 0."""
        bad = []
        for n in range(2, self.top + 1):
            prod = self.d(n - 1) @ self.d(n)
            if any(x != 0 for x in prod.flat):
                bad.append(n)
        return bad

    def validate(self) -> None:
        bad = self.squares_to_zero()
        if bad:
            raise DomainError(f"boundary does not square to zero: d_{bad[0] - 1} d_{bad[0]} != 0")

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks),
                "boundaries": {str(n): to_lists(m) for n, m in sorted(self.boundaries.items())}}


def homology(C: IntChainComplex) -> list[FgAbGroup]:
    """H_n = ker d_n / im d_{n+1} for n = 0..top, via Smith normal form."""
    C.validate()
    out = []
    snfs = {n: smith_normal_form(C.d(n), transforms=False) for n in range(1, C.top + 2)}
    for n in range(C.top + 1):
        rk_out = snfs[n].rank if n >= 1 else 0
        nxt = snfs[n + 1]
        free = C.rank_at(n) - rk_out - nxt.rank
        out.append(FgAbGroup(free, tuple(s for s in nxt.diagonal if s > 1)))
    return out


@dataclass
class HomologyBasis:
    """H_n with explicit cycle representatives and a coordinate map."""

    group: FgAbGroup
    generators: np.ndarray  # chain-space columns, one per canonical generator
    _cycle_coords: np.ndarray
    _canon: CanonicalBasis

    def coords(self, cycle: np.ndarray) -> np.ndarray:
        """Canonical coordinates of a cycle (column vector)."""
        return self._canon.coords(self._cycle_coords @ cycle.reshape(-1, 1))


def homology_basis(C: IntChainComplex, n: int) -> HomologyBasis:
    dn = C.d(n)
    rank_n = C.rank_at(n)
    if n >= 1 and dn.shape[0] > 0:
        snf = smith_normal_form(dn)
        K = snf.V[:, snf.rank:].reshape(rank_n, rank_n - snf.rank)
        P = snf.V_inv[snf.rank:, :].reshape(rank_n - snf.rank, rank_n)
    else:
        K = identity(rank_n)
        P = identity(rank_n)
    B = P @ C.d(n + 1) if C.d(n + 1).shape[1] else zeros(K.shape[1], 0)
    canon = canonical_basis(K.shape[1], B.reshape(K.shape[1], -1) if B.size else zeros(K.shape[1], 0))
    gens = K @ canon.from_canon if canon.from_canon.size else zeros(rank_n, canon.group.ngens)
    return HomologyBasis(canon.group, gens, P, canon)


def induced_map(source: HomologyBasis, target: HomologyBasis, chain_map: np.ndarray) -> np.ndarray:
    """Matrix of the homology map induced by ``chain_map`` in canonical coordinates."""
    out = zeros(target.group.ngens, source.group.ngens)
    for j in range(source.group.ngens):
        image = chain_map @ source.generators[:, j].reshape(-1, 1)
        out[:, j] = target.coords(image).reshape(-1)
    return out
