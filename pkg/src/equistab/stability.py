"""Stabilization and finite generation.

Single-graded sequences A_0 -> A_1 -> ... are tested for eventual
isomorphism; modules graded by G-set classes (or by cardinality) with commuting
stabilization operators are tested for finite generation by computing, grade
by grade, the cokernel of the sum of all operator images.  A positive answer
is certified up to the data bound; a negative answer is evidence only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .concrete import ConcreteGSet
from .errors import DomainError, ValidationError
from .groups import FiniteAbelianGroup, SubgroupId, subgroup_label
from .intlinalg import (FgAbGroup, Presentation, analyze_hom, hstack, identity, matmul, matrix, to_lists,
                        zeros)

Grade = Hashable


# Single-graded sequences ---------------------------------------------------

@dataclass
class GradedSequence:
    """A_0 -> A_1 -> ... -> A_N in canonical coordinates of each A_n."""

    groups: list[FgAbGroup]
    maps: list[np.ndarray]

    def __post_init__(self):
        if len(self.maps) != len(self.groups) - 1:
            raise ValidationError(f"{len(self.groups)} groups need {len(self.groups) - 1} maps, got {len(self.maps)}")
        for n, F in enumerate(self.maps):
            want = (self.groups[n + 1].ngens, self.groups[n].ngens)
            if F.shape != want:
                raise ValidationError(f"sigma_{n} has shape {F.shape}, expected {want}")
            src = Presentation.of_group(self.groups[n])
            tgt = Presentation.of_group(self.groups[n + 1])
            if not analyze_hom(F, src, tgt).well_defined:
                raise ValidationError(f"sigma_{n} does not respect the torsion relations")

    @property
    def n_max(self) -> int:
        return len(self.groups) - 1

    def to_module(self) -> "MultigradedModule":
        """The Z[sigma]-module sum A_n, graded by n."""
        grades = list(range(len(self.groups)))
        pieces = {n: Presentation.of_group(A) for n, A in enumerate(self.groups)}
        op = Operator("sigma", "sigma", 1, {n: (n + 1, F) for n, F in enumerate(self.maps)})
        return MultigradedModule(grades, {n: n for n in grades}, pieces, [op], self.n_max,
                                 names={n: str(n) for n in grades})

    def to_json(self) -> dict:
        return {"schema": "equistab.sequence/1",
                "groups": [A.to_json() for A in self.groups],
                "maps": [to_lists(F) for F in self.maps]}

    @classmethod
    def from_json(cls, data) -> "GradedSequence":
        if not isinstance(data, dict) or "groups" not in data:
            raise ValidationError("sequence needs 'groups' and 'maps'")
        groups = [FgAbGroup.from_json(g) for g in data["groups"]]
        maps = []
        for n, F in enumerate(data.get("maps", [])):
            maps.append(matrix(F, shape=(groups[n + 1].ngens, groups[n].ngens)) if n + 1 < len(groups)
                        else matrix(F))
        return cls(groups, maps)


@dataclass(frozen=True)
class StabilizationReport:
    stable: bool
    stable_from: int | None
    n_max: int
    window: int
    isomorphic: tuple[bool, ...]  # per sigma_n
    failing: tuple[int, ...]      # indices n with sigma_n not an isomorphism

    def to_json(self) -> dict:
        out = {"stable": self.stable, "n_max": self.n_max, "window": self.window,
               "failing": list(self.failing)}
        if self.stable:
            out["stable_from"] = self.stable_from
        else:
            out["not_stable_up_to"] = self.n_max
        return out


def check_stabilization(seq: GradedSequence, window: int = 1) -> StabilizationReport:
    """Least N with sigma_n an isomorphism for N <= n < N_max.

    The sequence counts as stable only if at least ``window`` of the top maps
    are isomorphisms.
    """
    if window < 1:
        raise ValidationError("window must be at least 1")
    if window > seq.n_max:
        raise DomainError(f"window {window} exceeds the data range {seq.n_max}")
    iso = tuple(analyze_hom(F, Presentation.of_group(seq.groups[n]),
                            Presentation.of_group(seq.groups[n + 1])).isomorphism
                for n, F in enumerate(seq.maps))
    N = seq.n_max
    while N > 0 and iso[N - 1]:
        N -= 1
    stable = seq.n_max - N >= window
    failing = tuple(n for n, ok in enumerate(iso) if not ok)
    return StabilizationReport(stable, N if stable else None, seq.n_max, window, iso, failing)


def cokernel_profile(seq: GradedSequence) -> dict[int, FgAbGroup]:
    """coker(sigma_{n-1}: A_{n-1} -> A_n) for n = 1..N_max."""
    out = {}
    for n in range(1, seq.n_max + 1):
        tgt = Presentation.of_group(seq.groups[n])
        out[n] = Presentation(tgt.ngens, hstack([tgt.relations, seq.maps[n - 1]], tgt.ngens)).group()
    return out


@dataclass(frozen=True)
class FGWitness:
    generators: tuple[tuple[int, tuple[int, ...]], ...]  # (degree, canonical coordinates)
    validated: bool
    failures: tuple[int, ...]

    def to_json(self) -> dict:
        return {"generators": [{"degree": n, "coords": list(v)} for n, v in self.generators],
                "validated": self.validated, "failures": list(self.failures)}


def validate_generators(seq: GradedSequence, generators: Iterable[tuple[int, Sequence[int]]]) -> list[int]:
    """Degrees n where the sigma-translates of ``generators`` fail to span A_n."""
    by_degree: dict[int, list] = {}
    for n, v in generators:
        by_degree.setdefault(n, []).append(np.array([int(x) for x in v], dtype=object).reshape(-1, 1))
    span: list[np.ndarray] = []
    bad = []
    for n in range(seq.n_max + 1):
        if n:
            span = [seq.maps[n - 1] @ v for v in span]
        span += by_degree.get(n, [])
        A = seq.groups[n]
        cols = hstack([A.relations(), *span], A.ngens) if span else A.relations()
        if A.ngens and Presentation(A.ngens, cols).group() != FgAbGroup():
            bad.append(n)
    return bad


def fg_witness_from_stability(seq: GradedSequence, report: StabilizationReport | None = None) -> FGWitness:
    """Generators over Z[sigma]: lifts of coker(sigma_{n-1}) for n <= N, then
    checked to span every A_n through N_max."""
    report = report or check_stabilization(seq)
    if not report.stable:
        raise DomainError("sequence is not stable within the data range; no generating set can be certified")
    gens = []
    for n in range(report.stable_from + 1):
        A = Presentation.of_group(seq.groups[n])
        images = seq.maps[n - 1] if n else zeros(A.ngens, 0)
        cb = Presentation(A.ngens, hstack([A.relations, images], A.ngens)).canonical()
        for j in range(cb.group.ngens):
            gens.append((n, tuple(int(x) for x in seq.groups[n].reduce(cb.from_canon[:, j:j + 1]).flat)))
    bad = validate_generators(seq, gens)
    return FGWitness(tuple(gens), not bad, tuple(bad))


# Multigraded modules ---------------------------------------------------------

@dataclass
class Operator:
    """A stabilization operator: ``maps[s] = (t, F)`` sends piece s to piece t."""

    key: Hashable
    name: str
    shift: int
    maps: dict[Grade, tuple[Grade, np.ndarray]]


@dataclass(frozen=True)
class Monomial:
    """Product of operator powers, used as one generator of the acting ring."""

    factors: tuple[tuple[Hashable, int], ...]
    name: str

    @classmethod
    def single(cls, op: Operator) -> "Monomial":
        return cls(((op.key, 1),), op.name)


class MultigradedModule:
    """Grade-finite module over a polynomial ring of commuting operators.

    ``pieces[g]`` presents the degree-g part on named generators; data is
    complete for grades of cardinality at most ``bound``.
    """

    def __init__(self, grades: list[Grade], cardinality: dict[Grade, int], pieces: dict[Grade, Presentation],
                 operators: list[Operator], bound: int, names: dict[Grade, str] | None = None,
                 labels: dict[Grade, list[str]] | None = None, validate: bool = True):
        self.grades = list(grades)
        self.cardinality = dict(cardinality)
        self.pieces = dict(pieces)
        self.operators = {op.key: op for op in operators}
        self.bound = int(bound)
        self.names = names or {g: str(g) for g in self.grades}
        self.labels = labels or {g: [f"g{i}" for i in range(self.pieces[g].ngens)] for g in self.grades}
        if validate:
            self.validate()

    def sort_key(self, g: Grade):
        return (self.cardinality[g], self.names[g])

    def ordered_grades(self) -> list[Grade]:
        return sorted(self.grades, key=self.sort_key)

    def _zero(self, g: Grade, v: np.ndarray) -> bool:
        return self.pieces[g].canonical().is_zero(v)

    def validate(self) -> None:
        grade_set = set(self.grades)
        for g in self.grades:
            if g not in self.pieces:
                raise ValidationError(f"missing piece for grade {self.names.get(g, g)}")
            if self.cardinality[g] > self.bound:
                raise ValidationError(f"grade {self.names[g]} exceeds the bound {self.bound}")
        for op in self.operators.values():
            for s, (t, F) in op.maps.items():
                if s not in grade_set or t not in grade_set:
                    raise ValidationError(f"operator {op.name} refers to an unknown grade")
                if self.cardinality[t] != self.cardinality[s] + op.shift:
                    raise ValidationError(f"operator {op.name} shifts {self.names[s]} by the wrong amount")
                src, tgt = self.pieces[s], self.pieces[t]
                if F.shape != (tgt.ngens, src.ngens):
                    raise ValidationError(f"operator {op.name} at {self.names[s]} has shape {F.shape}")
                if src.relations.shape[1]:
                    if not self._zero(t, matmul(F, src.relations)):
                        raise ValidationError(f"operator {op.name} at {self.names[s]} does not respect relations")
        ops = list(self.operators.values())
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                A, B = ops[a], ops[b]
                for s in self.grades:
                    if s not in A.maps or s not in B.maps:
                        continue
                    ta, Fa = A.maps[s]
                    tb, Fb = B.maps[s]
                    if ta not in B.maps or tb not in A.maps:
                        continue
                    t1, G1 = B.maps[ta]
                    t2, G2 = A.maps[tb]
                    if t1 != t2:
                        raise ValidationError(f"operators {A.name}, {B.name} disagree on target grades at {self.names[s]}")
                    if not self._zero(t1, matmul(G1, Fa) - matmul(G2, Fb)):
                        raise ValidationError(f"operators {A.name} and {B.name} do not commute at {self.names[s]}")

    def apply(self, mono: Monomial, s: Grade) -> tuple[Grade, np.ndarray] | None:
        """Target grade and matrix of a monomial on piece s, or None past the bound."""
        F = identity(self.pieces[s].ngens)
        g = s
        for key, e in mono.factors:
            op = self.operators.get(key)
            if op is None:
                raise DomainError(f"no operator {key!r} on this module")
            for _ in range(e):
                if g not in op.maps:
                    return None
                g, M = op.maps[g]
                F = matmul(M, F)
        return g, F

    def shift(self, mono: Monomial) -> int:
        return sum(self.operators[k].shift * e for k, e in mono.factors)

    def to_json(self) -> dict:
        order = self.ordered_grades()
        idx = {g: i for i, g in enumerate(order)}
        return {
            "schema": "equistab.module/1",
            "bound": self.bound,
            "grades": [{"name": self.names[g], "cardinality": self.cardinality[g],
                        "generators": self.labels[g], "relations": to_lists(self.pieces[g].relations.T)}
                       for g in order],
            "operators": [{"name": op.name, "shift": op.shift,
                           "maps": [{"from": idx[s], "to": idx[t], "matrix": to_lists(F)}
                                    for s, (t, F) in sorted(op.maps.items(), key=lambda kv: idx[kv[0]])]}
                          for op in self.operators.values()],
        }


def parse_module(data) -> MultigradedModule:
    """Read the JSON module schema: grades with generator names and relation
    rows, operators with matrices between grade indices."""
    if not isinstance(data, dict) or "grades" not in data:
        raise ValidationError("module needs 'grades'")
    grades, card, pieces, names, labels = [], {}, {}, {}, {}
    for i, entry in enumerate(data["grades"]):
        gens = [str(x) for x in entry.get("generators", [])]
        if "ngens" in entry and not gens:
            gens = [f"g{j}" for j in range(int(entry["ngens"]))]
        rels = entry.get("relations", [])
        R = matrix(rels, shape=(len(rels), len(gens))).T if rels else zeros(len(gens), 0)
        R = R.reshape(len(gens), -1)
        grades.append(i)
        card[i] = int(entry["cardinality"])
        pieces[i] = Presentation(len(gens), R)
        names[i] = str(entry.get("name", i))
        labels[i] = gens
    ops = []
    for entry in data.get("operators", []):
        maps = {}
        for m in entry.get("maps", []):
            s, t = int(m["from"]), int(m["to"])
            if not (0 <= s < len(grades) and 0 <= t < len(grades)):
                raise ValidationError("operator map refers to a missing grade")
            maps[s] = (t, matrix(m["matrix"], shape=(pieces[t].ngens, pieces[s].ngens)) if pieces[s].ngens and pieces[t].ngens
                       else zeros(pieces[t].ngens, pieces[s].ngens))
        ops.append(Operator(str(entry["name"]), str(entry["name"]), int(entry.get("shift", 1)), maps))
    bound = int(data.get("bound", max(card.values(), default=0)))
    return MultigradedModule(grades, card, pieces, ops, bound, names, labels)


@dataclass(frozen=True)
class GeneratorInfo:
    grade: str
    cardinality: int
    group: FgAbGroup
    lifts: tuple[str, ...]  # each lift written in the piece's generator names


@dataclass(frozen=True)
class FGReport:
    finitely_generated: bool
    bound: int
    window: int
    ring: tuple[str, ...]
    generators: tuple[GeneratorInfo, ...]  # every grade with nonzero cokernel
    max_generator_cardinality: int | None
    pattern: str | None = None

    def to_json(self) -> dict:
        out = {
            "finitely_generated": self.finitely_generated,
            "certified_up_to": self.bound if self.finitely_generated else None,
            "bound": self.bound, "window": self.window, "ring": list(self.ring),
            "cokernels": [{"grade": g.grade, "cardinality": g.cardinality, "group": g.group.to_json(),
                           "group_str": str(g.group), "lifts": list(g.lifts)} for g in self.generators],
            "max_generator_cardinality": self.max_generator_cardinality,
        }
        if self.pattern is not None:
            out["persistence"] = self.pattern
        return out


def _combination(labels: list[str], v: np.ndarray) -> str:
    nz = [int(c) for c in v.flat if c]
    if nz and nz[0] < 0:
        v = -v  # a generator of a cyclic summand up to sign
    parts = []
    for name, c in zip(labels, v.flat):
        c = int(c)
        if c == 1:
            parts.append(name)
        elif c == -1:
            parts.append(f"-{name}")
        elif c:
            parts.append(f"{c}*{name}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _pattern(cards: list[int], bound: int) -> str:
    """Describe where cokernels persist, spotting arithmetic progressions."""
    positive = sorted(c for c in set(cards) if c > 0)
    if not positive:
        return "nonzero only at cardinality 0"
    if len(positive) >= 2:
        a, step = positive[0], positive[1] - positive[0]
        if positive == list(range(a, positive[-1] + 1, step)) and positive[-1] + step > bound:
            count = len(positive)
            if a == step:
                return f"nonzero at every cardinality {step}*i for i = 1..{count} (through the bound {bound})"
            return f"nonzero at every cardinality {a} + {step}*i for i = 0..{count - 1} (through the bound {bound})"
    return "nonzero at cardinalities " + ", ".join(map(str, positive))


def fg_check_multigraded(module: MultigradedModule, ring: Sequence[Monomial] | None = None,
                         window: int | None = None) -> FGReport:
    """Semi-decide finite generation over the ring generated by ``ring``.

    For each grade g the cokernel of the sum of images of all ring generators
    landing in g is computed exactly.  If it vanishes for every grade whose
    cardinality lies in the top ``window`` of the bound, the nonzero cokernels
    below give a generating set, certified up to the bound.
    """
    if ring is None:
        ring = [Monomial.single(op) for op in module.operators.values()]
    ring = list(ring)
    shifts = [module.shift(m) for m in ring]
    if any(s <= 0 for s in shifts):
        raise ValidationError("ring generators must raise the cardinality")
    if window is None:
        window = max(shifts, default=1)
    if window < 1:
        raise ValidationError("window must be at least 1")
    images: dict[Grade, list[np.ndarray]] = {}
    for s in module.grades:
        for m in ring:
            hit = module.apply(m, s)
            if hit is not None:
                images.setdefault(hit[0], []).append(hit[1])
    found = []
    top_clear = True
    for g in module.ordered_grades():
        P = module.pieces[g]
        coker = Presentation(P.ngens, hstack([P.relations, *images.get(g, [])], P.ngens))
        cb = coker.canonical()
        if cb.group.is_zero():
            continue
        lifts = tuple(_combination(module.labels[g], cb.from_canon[:, j]) for j in range(cb.group.ngens))
        found.append(GeneratorInfo(module.names[g], module.cardinality[g], cb.group, lifts))
        if module.cardinality[g] > module.bound - window:
            top_clear = False
    names = tuple(m.name for m in ring)
    max_card = max((f.cardinality for f in found), default=None)
    if top_clear:
        return FGReport(True, module.bound, window, names, tuple(found), max_card)
    return FGReport(False, module.bound, window, names, tuple(found), max_card,
                    _pattern([f.cardinality for f in found], module.bound))


# Restriction of stabilization rings -------------------------------------------

@dataclass(frozen=True)
class PolyRingMap:
    """res: P_source -> P_target on generators: sigma[source/H] -> sigma[target/L]^e."""

    group: FiniteAbelianGroup
    source: SubgroupId
    target: SubgroupId
    images: tuple[tuple[SubgroupId, SubgroupId, int], ...]  # (H, L, e)
    validated: bool = True
    integral: bool = True

    def image(self, H: SubgroupId) -> tuple[SubgroupId, int]:
        for h, L, e in self.images:
            if h == H:
                return L, e
        raise DomainError("subgroup is not an orbit type of the source group")

    def compose(self, other: "PolyRingMap") -> dict[SubgroupId, tuple[SubgroupId, int]]:
        """Apply ``self`` then ``other`` (other.source must be self.target)."""
        if other.source != self.target:
            raise DomainError("restriction maps do not compose")
        out = {}
        for H, L, e in self.images:
            L2, e2 = other.image(L)
            out[H] = (L2, e * e2)
        return out

    def to_json(self) -> dict:
        G = self.group
        return {"source": subgroup_label(G, self.source), "target": subgroup_label(G, self.target),
                "images": [{"generator": f"sigma[{subgroup_label(G, self.source)}/{subgroup_label(G, H)}]",
                            "image": f"sigma[{subgroup_label(G, self.target)}/{subgroup_label(G, L)}]",
                            "exponent": e} for H, L, e in self.images],
                "validated": self.validated, "integral": self.integral}


def restriction_by_orbits(G: FiniteAbelianGroup, source: SubgroupId, K: SubgroupId,
                          H: SubgroupId) -> dict[SubgroupId, int]:
    """K-orbit types of the concrete coset space source/H, counted point by point."""
    cls = ConcreteGSet(G, source, (H,)).classify(K)
    return dict(cls.items())


def restrict_polynomial(G: FiniteAbelianGroup, K: SubgroupId, source: SubgroupId | None = None) -> PolyRingMap:
    """sigma[A/H] -> sigma[K/(K meet H)]^[A:HK] for A = ``source`` (default G).

    The images are compared with the K-orbit decomposition of A/H, and every
    generator sigma[K/L] is checked to have a power in the image.
    """
    A = G.whole if source is None else source
    G.check_subgroup(K)
    if not K <= A:
        raise DomainError("target subgroup is not contained in the source group")
    images = []
    validated = True
    for H in G.subgroups():
        if not H <= A:
            continue
        L = G.meet(K, H)
        e = A.order // G.join(H, K).order
        images.append((H, L, e))
        if restriction_by_orbits(G, A, K, H) != {L: e}:
            validated = False
    # sigma[K/L] for L <= K is the image of sigma[A/L], raised to [A:K]
    integral = all(any(L2 == L for _, L2, _ in images) for L in G.subgroups() if L <= K)
    return PolyRingMap(G, A, K, tuple(images), validated, integral)


@dataclass(frozen=True)
class MackeyFGReport:
    finitely_generated: bool
    levels: tuple[tuple[str, FGReport], ...]
    failing_levels: tuple[str, ...]

    def to_json(self) -> dict:
        return {"finitely_generated": self.finitely_generated,
                "failing_levels": list(self.failing_levels),
                "levels": [{"level": name, **rep.to_json()} for name, rep in self.levels]}


def mackey_fg_check(G: FiniteAbelianGroup, levels: dict[SubgroupId, MultigradedModule],
                    source: SubgroupId | None = None, window: int | None = None) -> MackeyFGReport:
    """Levelwise finite generation over P_A (A = ``source``, default G).

    The module at level K has operators keyed by subgroups L <= K (acting as
    sigma[K/L]); P_A acts through :func:`restrict_polynomial`.  The result is
    finitely generated iff every level is.
    """
    A = G.whole if source is None else source
    out = []
    failing = []
    for K in G.subgroups():
        if not K <= A:
            continue
        if K not in levels:
            raise DomainError(f"missing level {subgroup_label(G, K)}")
        module = levels[K]
        phi = restrict_polynomial(G, K, A)
        ring = []
        for H, L, e in phi.images:
            if L in module.operators:
                name = f"res sigma[{subgroup_label(G, A)}/{subgroup_label(G, H)}]"
                ring.append(Monomial(((L, e),), name))
        report = fg_check_multigraded(module, ring, window)
        name = subgroup_label(G, K)
        out.append((name, report))
        if not report.finitely_generated:
            failing.append(name)
    return MackeyFGReport(not failing, tuple(out), tuple(failing))
