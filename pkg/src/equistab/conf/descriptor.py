"""Combinatorial descriptions of a G-manifold M and homology tables for the
unordered configuration spaces C_k(M_(H)/G) of its orbit-type strata.

The tables are inputs: the stabilization maps C_k -> C_{k+1} on homology are
given as integer matrices in canonical coordinates.  Rows at degree 0 are
filled in from the connectivity flags, and k = 0 (a point) is always known.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, ValidationError
from ..groups import FiniteAbelianGroup, SubgroupId, parse_group, parse_subgroup, subgroup_label
from ..gsets import OrbitTypes
from ..intlinalg import FgAbGroup, Presentation, analyze_hom, identity, matrix, to_lists, zeros
from ..reps import RealRepresentation, is_stabilizable, isotropy_strata, parse_representation, regular_rep

Z = FgAbGroup(1)


@dataclass(frozen=True)
class StratumFlags:
    nonempty: bool
    connected: bool | None  # quotient M_(H)/G connected; None = unknown
    stabilizable: bool

    def __post_init__(self):
        if self.stabilizable and not self.nonempty:
            raise ValidationError("a stabilizable stratum must be nonempty")


@dataclass
class HomologyTable:
    """H_d(C_k) for the configuration spaces of one stratum quotient, with the
    stabilization maps H_d(C_k) -> H_d(C_{k+1}).

    Rows that are forced are answered without being stored: k = 0 is a point,
    and a connected quotient has H_0 = Z with identity maps for every k.
    """

    entries: dict[tuple[int, int], FgAbGroup] = field(default_factory=dict)
    maps: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    connected: bool | None = None

    def filled(self, connected: bool | None) -> "HomologyTable":
        """Copy that answers the forced rows, after checking given data against them."""
        out = HomologyTable(dict(self.entries), dict(self.maps), connected)
        for (k, d), A in self.entries.items():
            if k == 0 and A != (Z if d == 0 else FgAbGroup()):
                raise ValidationError(f"C_0 is a point but H_{d}(C_0) was given as {A}")
            if d == 0 and connected and A != Z:
                raise ValidationError(f"connected stratum but H_0(C_{k}) = {A}")
        out.validate()
        return out

    def has_entry(self, k: int, d: int) -> bool:
        return (k, d) in self.entries or k == 0 or (d == 0 and bool(self.connected))

    def has_map(self, k: int, d: int) -> bool:
        if (k, d) in self.maps:
            return True
        if d == 0 and self.connected:
            return True
        return k == 0 and d > 0 and self.has_entry(1, d)

    def validate(self) -> None:
        for (k, d), F in self.maps.items():
            if not (self.has_entry(k, d) and self.has_entry(k + 1, d)):
                raise ValidationError(f"map at (k={k}, d={d}) without both adjacent entries")
            src, tgt = self.entry(k, d), self.entry(k + 1, d)
            if F.shape != (tgt.ngens, src.ngens):
                raise ValidationError(f"map at (k={k}, d={d}) has shape {F.shape}, expected {(tgt.ngens, src.ngens)}")
            if not analyze_hom(F, Presentation.of_group(src), Presentation.of_group(tgt)).well_defined:
                raise ValidationError(f"map at (k={k}, d={d}) is not well defined on torsion")

    def entry(self, k: int, d: int) -> FgAbGroup:
        if (k, d) in self.entries:
            return self.entries[(k, d)]
        if k == 0:
            return Z if d == 0 else FgAbGroup()
        if d == 0 and self.connected:
            return Z
        raise DomainError(f"missing table entry H_{d}(C_{k})")

    def map(self, k: int, d: int) -> np.ndarray:
        if (k, d) in self.maps:
            return self.maps[(k, d)]
        if d == 0 and self.connected:
            return identity(1)
        if k == 0 and d > 0 and self.has_entry(1, d):
            return zeros(self.entry(1, d).ngens, 0)
        raise DomainError(f"missing table map H_{d}(C_{k}) -> H_{d}(C_{k + 1})")

    def is_iso(self, k: int, d: int) -> bool:
        return analyze_hom(self.map(k, d), Presentation.of_group(self.entry(k, d)),
                           Presentation.of_group(self.entry(k + 1, d))).isomorphism

    def missing(self, k: int, d: int, with_maps: bool = False) -> list[str]:
        out = [f"H_{i}(C_{k})" for i in range(d + 1) if not self.has_entry(k, i)]
        if with_maps:
            out += [f"H_{i}(C_{k + 1})" for i in range(d + 1) if not self.has_entry(k + 1, i)]
            out += [f"H_{i}(C_{k})->H_{i}(C_{k + 1})" for i in range(d + 1) if not self.has_map(k, i)]
        return out

    def to_json(self) -> dict:
        return {"entries": [{"k": k, "d": d, **A.to_json()} for (k, d), A in sorted(self.entries.items())],
                "maps": [{"k": k, "d": d, "matrix": to_lists(F)} for (k, d), F in sorted(self.maps.items())]}

    @classmethod
    def from_json(cls, data) -> "HomologyTable":
        if not isinstance(data, dict):
            raise ValidationError("homology table must be an object")
        entries = {}
        for e in data.get("entries", []):
            entries[(int(e["k"]), int(e["d"]))] = FgAbGroup.from_json(e)
        maps = {}
        for e in data.get("maps", []):
            k, d = int(e["k"]), int(e["d"])
            src, tgt = entries.get((k, d)), entries.get((k + 1, d))
            rows = e["matrix"]
            if src is not None and tgt is not None and (src.ngens == 0 or tgt.ngens == 0):
                maps[(k, d)] = zeros(tgt.ngens, src.ngens)
            else:
                maps[(k, d)] = matrix(rows)
        return cls(entries, maps)


@dataclass
class ManifoldDescriptor:
    """What the configuration-space computations need to know about M.

    ``flags`` has one entry per subgroup of ``ambient``; ``tables`` holds the
    optional homology tables per stratum.
    """

    group: FiniteAbelianGroup
    ambient: SubgroupId
    flags: dict[SubgroupId, StratumFlags]
    tables: dict[SubgroupId, HomologyTable] = field(default_factory=dict)
    provenance: str = "user"
    representation: RealRepresentation | None = None
    restrictions: dict[SubgroupId, "ManifoldDescriptor"] = field(default_factory=dict)

    def __post_init__(self):
        for H in self.types.subgroups:
            if H not in self.flags:
                raise ValidationError(f"no stratum flags for {subgroup_label(self.group, H)}")

    @property
    def types(self) -> OrbitTypes:
        return OrbitTypes.of(self.group, self.ambient)

    def label(self, H: SubgroupId) -> str:
        return subgroup_label(self.group, H)

    def nonempty(self, H: SubgroupId) -> bool:
        return self.flags[H].nonempty

    def stabilizable(self, H: SubgroupId) -> bool:
        return self.flags[H].stabilizable

    def require_connected(self, H: SubgroupId) -> None:
        c = self.flags[H].connected
        if c is None:
            raise DomainError(f"connectivity of the stratum quotient at {self.label(H)} is unknown")
        if not c:
            raise DomainError(f"stratum quotient at {self.label(H)} is disconnected; "
                              "the Weyl action on its components is not determined by this data")

    def table(self, H: SubgroupId) -> HomologyTable:
        """Table for the stratum at H with the automatic rows filled in."""
        if not self.nonempty(H):
            raise DomainError(f"stratum {self.label(H)} is empty")
        return self.tables.get(H, HomologyTable()).filled(self.flags[H].connected)

    def restrict(self, K: SubgroupId) -> "ManifoldDescriptor":
        """The same manifold with the action restricted to K."""
        self.group.check_subgroup(K)
        if K == self.ambient:
            return self
        if not K <= self.ambient:
            raise DomainError("restriction target is not contained in the acting group")
        if K in self.restrictions:
            return self.restrictions[K]
        if self.representation is not None:
            connected = True if self.provenance == "rho-model" else None
            out = from_representation(self.representation.restrict(K), connected)
            out.provenance = self.provenance
            return out
        raise DomainError(f"no restricted descriptor for {self.label(K)}")

    def to_json(self) -> dict:
        G = self.group
        out = {"schema": "equistab.manifold/1", "group": G.to_json(), "ambient": self.ambient.to_json(),
               "provenance": self.provenance,
               "strata": [{"subgroup": H.to_json(), "label": self.label(H), "nonempty": f.nonempty,
                           "connected": f.connected, "stabilizable": f.stabilizable}
                          for H, f in ((H, self.flags[H]) for H in self.types.subgroups)]}
        if self.representation is not None:
            rep = self.representation.to_json()
            if self.representation.ambient != G.whole:
                rep["restrict_to"] = self.representation.ambient.to_json()
            out["representation"] = rep
            out["connected"] = [{"subgroup": H.to_json(), "connected": f.connected}
                                for H, f in self.flags.items() if f.connected is not None]
        if self.tables:
            out["tables"] = [{"subgroup": H.to_json(), **self.tables[H].to_json()}
                             for H in self.types.subgroups if H in self.tables]
        return out


def from_representation(V: RealRepresentation, connected: bool | dict | None = None,
                        tables: dict | None = None) -> ManifoldDescriptor:
    """Flags read off the isotropy strata of V (the manifold being V itself).

    ``connected`` is a single flag for all strata, a per-subgroup dict, or None
    (unknown).
    """
    G = V.group
    strata = {s.subgroup for s in isotropy_strata(V)}
    flags = {}
    for H in V.subgroups:
        c = connected.get(H) if isinstance(connected, dict) else connected
        nonempty = H in strata
        flags[H] = StratumFlags(nonempty, c if nonempty else None, is_stabilizable(V, H))
    return ManifoldDescriptor(G, V.ambient, flags, dict(tables or {}), "representation", V)


def rho_model(G: FiniteAbelianGroup, n: int = 1, tables: dict | None = None) -> ManifoldDescriptor:
    """M = n copies of the real regular representation: every stratum is
    nonempty and stabilizable with connected quotient."""
    out = from_representation(regular_rep(G, n), True, tables)
    out.provenance = "rho-model"
    for H, f in out.flags.items():
        if not (f.nonempty and f.stabilizable):
            raise AssertionError(f"regular representation lacks stratum {subgroup_label(G, H)}")
    return out


def parse_descriptor(data) -> ManifoldDescriptor:
    """JSON descriptor: ``{"group": ..., "model": {"rho": n}}``, or
    ``{"group": ..., "representation": {...}, "connected": bool}``, or explicit
    ``"strata"`` flags; optional ``"tables"`` and ``"restrictions"``."""
    if not isinstance(data, dict):
        raise ValidationError("manifold descriptor must be a JSON object")
    G = parse_group(data.get("group"))
    tables = {}
    for entry in data.get("tables", []):
        tables[parse_subgroup(G, entry["subgroup"])] = HomologyTable.from_json(entry)
    model = data.get("model")
    if model is not None:
        if not isinstance(model, dict) or "rho" not in model:
            raise ValidationError("unknown built-in model; use {\"rho\": n}")
        M = rho_model(G, int(model["rho"]), tables)
    elif "representation" in data:
        V = parse_representation(G, data["representation"])
        conn = data.get("connected")
        if isinstance(conn, list):
            conn = {parse_subgroup(G, e["subgroup"]): bool(e["connected"]) for e in conn}
        M = from_representation(V, conn, tables)
        if data.get("provenance") == "rho-model":
            M.provenance = "rho-model"
    else:
        ambient = parse_subgroup(G, data["ambient"]) if "ambient" in data else G.whole
        flags = {}
        for entry in data.get("strata", []):
            H = parse_subgroup(G, entry["subgroup"])
            if not H <= ambient:
                raise ValidationError("stratum subgroup outside the acting group")
            nonempty = bool(entry.get("nonempty", True))
            conn = entry.get("connected")
            flags[H] = StratumFlags(nonempty, None if conn is None else bool(conn),
                                    bool(entry.get("stabilizable", False)))
        for H in OrbitTypes.of(G, ambient).subgroups:
            flags.setdefault(H, StratumFlags(False, None, False))
        M = ManifoldDescriptor(G, ambient, flags, tables, "user")
    for entry in data.get("restrictions", []):
        K = parse_subgroup(G, entry["subgroup"])
        sub = dict(entry["descriptor"])
        sub.setdefault("group", G.to_json())
        sub.setdefault("ambient", K.to_json())
        R = parse_descriptor(sub)
        if R.ambient != K:
            raise ValidationError("restricted descriptor has the wrong acting group")
        M.restrictions[K] = R
    for H, T in M.tables.items():
        if not H <= M.ambient:
            raise ValidationError("table for a subgroup outside the acting group")
        M.table(H)  # validates
    return M
