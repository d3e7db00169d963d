"""``equistab`` command line.

Every command prints one JSON document (or a plain table with
``--format table``) to stdout.  Errors go to stderr as JSON with a
machine-readable code; exit status 2 means invalid input or an argument
outside the domain, 3 a resource bound, 0 success (negative mathematical
answers included).
"""
from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import dataclass, field

import click

from . import __version__
from .errors import EquistabError, ValidationError
from .groups import (DEFAULT_ORDER_BOUND, FiniteAbelianGroup, containment, enumerate_subgroups, lattice_ops,
                     parse_group, parse_subgroup, subgroup_label)
from .io import InputSource, dumps, validate


@dataclass
class RunManifest:
    command: list[str]
    version: str = __version__
    inputs: dict[str, str] = field(default_factory=dict)  # origin -> sha256
    bounds: dict[str, int] = field(default_factory=dict)
    seed: int | None = None
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"schema": "equistab.manifest/1", "command": self.command, "version": self.version,
                "inputs": [{"source": k, "sha256": v} for k, v in sorted(self.inputs.items())],
                "bounds": dict(sorted(self.bounds.items())), "seed": self.seed,
                "wall_time_seconds": round(self.wall_time, 6)}


class Context:
    def __init__(self, fmt: str, manifest_path: str | None, argv: list[str]):
        self.fmt = fmt
        self.manifest_path = manifest_path
        self.manifest = RunManifest(list(argv))
        self.start = time.perf_counter()

    def read(self, spec: str, kind: str | None = None):
        src = InputSource(spec)
        self.manifest.inputs[src.origin if src.origin != "inline" else f"inline:{len(self.manifest.inputs)}"] = src.digest
        if kind is not None:
            validate(src.data, kind)
        return src.data

    def bound(self, name: str, value: int) -> int:
        self.manifest.bounds[name] = value
        return value

    def emit(self, obj) -> None:
        click.echo(dumps(obj, self.fmt))
        if self.manifest_path:
            self.manifest.wall_time = time.perf_counter() - self.start
            with open(self.manifest_path, "w") as fh:
                json.dump(self.manifest.to_json(), fh, indent=2)
                fh.write("\n")


def _override(attr):
    def callback(cctx: click.Context, param, value):
        if value is not None:
            setattr(cctx.find_object(Context), attr, value)
    return callback


def _pass_ctx(f):
    """Pass the run context; --format and --manifest may also follow the subcommand."""
    f = click.pass_obj(f)
    f = click.option("--manifest", type=click.Path(dir_okay=False), default=None, expose_value=False,
                     callback=_override("manifest_path"), help="Manifest file (same as the global option).")(f)
    f = click.option("--format", type=click.Choice(["json", "table"]), default=None, expose_value=False,
                     callback=_override("fmt"), help="Output format (same as the global option).")(f)
    return f


pass_ctx = _pass_ctx


def _group(ctx: Context, spec: str, bound: int | None = None) -> FiniteAbelianGroup:
    G = parse_group(spec)
    limit = ctx.bound("group_order", bound if bound is not None else DEFAULT_ORDER_BOUND)
    enumerate_subgroups(G, limit)  # raises ResourceBoundError past the bound
    return G


def _subgroup(G: FiniteAbelianGroup, spec: str):
    try:
        data = json.loads(spec)
    except json.JSONDecodeError:
        data = spec
    return parse_subgroup(G, data)


group_option = click.option("--group", "group_spec", required=True,
                            help="Invariant factors, e.g. '[2,4]'.")
bound_option = click.option("--bound", type=int, default=None, help="Resource bound for this command.")


@click.group()
@click.version_option(__version__, prog_name="equistab")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Write a reproducibility manifest (inputs, digests, bounds, timing) to this file.")
@click.pass_context
def main(cctx: click.Context, fmt: str, manifest_path: str | None):
    """Exact computations for equivariant configuration spaces and stability."""
    argv = cctx.obj if isinstance(cctx.obj, list) else sys.argv[1:]
    cctx.obj = Context(fmt, manifest_path, argv)


# group ---------------------------------------------------------------------------

@main.group("group")
def group_cmd():
    """Finite abelian groups and subgroup lattices."""


@group_cmd.command("subgroups")
@group_option
@bound_option
@pass_ctx
def group_subgroups(ctx: Context, group_spec: str, bound: int | None):
    """Enumerate all subgroups with their containment relation."""
    G = _group(ctx, group_spec, bound)
    subs = G.subgroups()
    cover = containment(subs)
    ctx.emit({"group": G.name(), "order": G.order, "count": len(subs),
              "subgroups": [{"index": i, "label": subgroup_label(G, H), "order": H.order,
                             "contained_in": [j for a, j in cover if a == i]}
                            for i, H in enumerate(subs)]})


@group_cmd.command("lattice")
@group_option
@click.option("--h", "h_spec", required=True, help="Subgroup: 'e', 'G', an index, or a JSON element list.")
@click.option("--k", "k_spec", required=True)
@bound_option
@pass_ctx
def group_lattice(ctx: Context, group_spec: str, h_spec: str, k_spec: str, bound: int | None):
    """Meet, join, index and quotient."""
    G = _group(ctx, group_spec, bound)
    H, K = _subgroup(G, h_spec), _subgroup(G, k_spec)
    ops = lattice_ops(G, H, K)
    ctx.emit({"meet": subgroup_label(G, ops.meet), "join": subgroup_label(G, ops.join),
              "index_of_h": ops.index, "quotient": ops.quotient.group.name(),
              "quotient_invariant_factors": list(ops.quotient.group.invariant_factors)})


# gsets ---------------------------------------------------------------------------

@main.group("gsets")
def gsets_cmd():
    """Finite G-sets up to isomorphism."""


@gsets_cmd.command("enum")
@group_option
@click.option("--size", type=int, required=True)
@bound_option
@pass_ctx
def gsets_enum(ctx: Context, group_spec: str, size: int, bound: int | None):
    """All G-set classes of a given cardinality."""
    from .gsets import enumerate_gsets
    G = _group(ctx, group_spec, bound)
    classes = enumerate_gsets(G, size)
    ctx.emit({"group": G.name(), "size": size, "count": len(classes),
              "classes": [S.to_json() for S in classes]})


@gsets_cmd.command("restrict")
@group_option
@click.option("--gset", "gset_spec", required=True, help='JSON like {"orbits":[{"subgroup":"e","mult":1}]}.')
@click.option("--to", "to_spec", required=True)
@pass_ctx
def gsets_restrict(ctx: Context, group_spec: str, gset_spec: str, to_spec: str):
    """Restrict a G-set to a subgroup."""
    from .gsets import OrbitTypes, parse_gset, restrict_gset
    G = _group(ctx, group_spec)
    S = parse_gset(OrbitTypes.of(G), ctx.read(gset_spec, "gset"))
    ctx.emit(restrict_gset(S, _subgroup(G, to_spec)).to_json())


@gsets_cmd.command("marks")
@group_option
@pass_ctx
def gsets_marks(ctx: Context, group_spec: str):
    """Table of marks: rows are subgroups K, columns orbits [G/H]."""
    from .gsets import OrbitTypes, table_of_marks
    G = _group(ctx, group_spec)
    types = OrbitTypes.of(G)
    labels = [subgroup_label(G, H) for H in types.subgroups]
    ctx.emit([{"K": labels[i], **{f"[G/{labels[j]}]": v for j, v in enumerate(row)}}
              for i, row in enumerate(table_of_marks(types))])


# reps ----------------------------------------------------------------------------

def _rep(ctx: Context, G, spec: str):
    from .reps import parse_representation
    return parse_representation(G, ctx.read(spec, "representation"))


@main.group("reps")
def reps_cmd():
    """Real representations and their isotropy strata."""


@reps_cmd.command("strata")
@group_option
@click.option("--rep", "rep_spec", required=True, help='JSON like {"regular":1} or {"characters":[...]}.')
@pass_ctx
def reps_strata(ctx: Context, group_spec: str, rep_spec: str):
    """Isotropy strata with fixed dimensions and minimal overgroups."""
    from .reps import isotropy_strata
    G = _group(ctx, group_spec)
    V = _rep(ctx, G, rep_spec)
    ctx.emit({"dim": V.dim, "strata": [{"subgroup": subgroup_label(G, s.subgroup), "fixed_dim": s.fixed_dim,
                                        "minimal_overgroups": [subgroup_label(G, K) for K in s.minimal_overgroups]}
                                       for s in isotropy_strata(V)]})


@reps_cmd.command("stabilizable")
@group_option
@click.option("--rep", "rep_spec", required=True)
@click.option("--subgroup", "sub_spec", default=None, help="Only this subgroup (default: all).")
@pass_ctx
def reps_stabilizable(ctx: Context, group_spec: str, rep_spec: str, sub_spec: str | None):
    """Whether the unit sphere has points of exact isotropy H."""
    from .reps import fixed_dim, is_stabilizable
    G = _group(ctx, group_spec)
    V = _rep(ctx, G, rep_spec)
    subs = [_subgroup(G, sub_spec)] if sub_spec else list(V.subgroups)
    ctx.emit([{"subgroup": subgroup_label(G, H), "fixed_dim": fixed_dim(V, H),
               "stabilizable": is_stabilizable(V, H)} for H in subs])


# bredon --------------------------------------------------------------------------

def _coeffs(ctx: Context, spec: str, G):
    from .mackey import burnside_mackey, constant_Z, parse_mackey
    if spec == "Z":
        return constant_Z(G)
    if spec == "A":
        return burnside_mackey(G)
    M = parse_mackey(ctx.read(spec, "mackey"))
    if M.group != G:
        raise ValidationError("coefficient system is over a different group than the complex")
    return M


@main.group("bredon")
def bredon_cmd():
    """Bredon homology of finite G-CW complexes."""


@bredon_cmd.command("homology")
@click.option("--complex", "complex_spec", required=True, help="G-CW complex JSON file.")
@click.option("--coeffs", default="Z", show_default=True, help="'Z' (constant), 'A' (Burnside) or a Mackey JSON file.")
@pass_ctx
def bredon_homology_cmd(ctx: Context, complex_spec: str, coeffs: str):
    """H_d for d = 0..dim."""
    from .bredon import bredon_homology, parse_gcw
    X = parse_gcw(ctx.read(complex_spec, "gcw"))
    H = bredon_homology(X, _coeffs(ctx, coeffs, X.group))
    ctx.emit([{"d": d, **A.to_json()} for d, A in enumerate(H)])


@bredon_cmd.command("fixed")
@click.option("--complex", "complex_spec", required=True)
@click.option("--subgroup", "sub_spec", required=True)
@pass_ctx
def bredon_fixed(ctx: Context, complex_spec: str, sub_spec: str):
    """Cellular homology of the K-fixed points."""
    from .bredon import fixed_point_complex, parse_gcw
    X = parse_gcw(ctx.read(complex_spec, "gcw"))
    FP = fixed_point_complex(X, _subgroup(X.group, sub_spec))
    ctx.emit([{"d": d, **A.to_json()} for d, A in enumerate(FP.homology())])


@bredon_cmd.command("check-mackey")
@group_option
@click.option("--coeffs", default="Z", show_default=True)
@pass_ctx
def bredon_check_mackey(ctx: Context, group_spec: str, coeffs: str):
    """Verify the Mackey functor axioms."""
    from .mackey import verify_mackey_axioms
    G = _group(ctx, group_spec)
    ctx.emit(verify_mackey_axioms(_coeffs(ctx, coeffs, G)).to_json())


# conf ----------------------------------------------------------------------------

def _manifold(ctx: Context, spec: str | None, group_spec: str | None, rho: int | None):
    from .conf import parse_descriptor, rho_model
    if spec:
        data = ctx.read(spec, "manifold")
        return parse_descriptor(data)
    if group_spec is None:
        raise ValidationError("give --manifold, or --group together with --rho")
    return rho_model(_group(ctx, group_spec), rho or 1)


manifold_options = [
    click.option("--manifold", "manifold_spec", default=None, help="Manifold descriptor JSON."),
    click.option("--group", "group_spec", default=None, help="With --rho: built-in regular-representation model."),
    click.option("--rho", type=int, default=None, help="Number of copies of the regular representation."),
]


def with_manifold(f):
    for opt in reversed(manifold_options):
        f = opt(f)
    return f


@main.group("conf")
def conf_cmd():
    """Fixed points of configuration spaces."""


@conf_cmd.command("components")
@with_manifold
@click.option("--size", type=int, required=True)
@pass_ctx
def conf_components(ctx: Context, manifold_spec, group_spec, rho, size: int):
    """Components of C_n(M)^G, one per placeable G-set, with their product decomposition."""
    from .conf import components_of_fixed_config, cs_decomposition
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    comps = components_of_fixed_config(M, size)
    ctx.emit({"size": size, "count": len(comps),
              "components": [cs_decomposition(S, M).to_json() for S in comps]})


@conf_cmd.command("homology")
@with_manifold
@click.option("--gset", "gset_spec", required=True)
@click.option("--degree", type=int, required=True)
@pass_ctx
def conf_homology(ctx: Context, manifold_spec, group_spec, rho, gset_spec: str, degree: int):
    """H_d of one component by the Künneth formula over its factors."""
    from .conf import cs_decomposition, homology_of_CSG
    from .gsets import parse_gset
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    S = parse_gset(M.types, ctx.read(gset_spec, "gset"))
    A = homology_of_CSG(S, M, degree)
    ctx.emit({"gset": S.label(), "product": cs_decomposition(S, M).describe(), "d": degree, **A.to_json()})


@conf_cmd.command("oracle")
@group_option
@click.option("--gset", "gset_spec", default=None, help="The finite G-set X (JSON orbits).")
@click.option("--size", type=int, default=None, help="n; all n <= |X| when omitted.")
@click.option("--random", "n_random", type=int, default=0, help="Instead: this many random X.")
@click.option("--max-points", type=int, default=12, show_default=True, help="Size of random X.")
@click.option("--seed", type=int, default=0, show_default=True)
@bound_option
@pass_ctx
def conf_oracle(ctx: Context, group_spec, gset_spec, size, n_random, max_points, seed, bound):
    """Brute-force census of invariant n-subsets against the binomial closed form."""
    from .concrete import ConcreteGSet
    from .conf import census_closed_form, discrete_config_oracle
    from .conf.oracle import MAX_POINTS
    from .gsets import OrbitTypes, enumerate_gsets_upto, parse_gset
    G = _group(ctx, group_spec)
    limit = ctx.bound("max_points", bound if bound is not None else MAX_POINTS)
    types = OrbitTypes.of(G)
    if gset_spec:
        sets = [parse_gset(types, ctx.read(gset_spec, "gset"))]
    elif n_random:
        ctx.manifest.seed = seed
        rng = random.Random(seed)
        pool = [S for S in enumerate_gsets_upto(types, max_points) if S.cardinality >= 1]
        sets = [rng.choice(pool) for _ in range(n_random)]
    else:
        raise ValidationError("give --gset or --random")
    out = []
    for X in sets:
        cx = ConcreteGSet.from_class(X)
        ns = [size] if size is not None else list(range(len(cx) + 1))
        for n in ns:
            brute = discrete_config_oracle(cx, n, limit)
            closed = census_closed_form(X, n)
            out.append({"X": X.label(), "n": n, "total": brute.total,
                        "match": brute.as_dict() == closed.as_dict(),
                        "census": [{"gset": S.label(), "count": c} for S, c in brute.counts]})
    ctx.emit(out if len(out) != 1 else out[0])


@conf_cmd.command("h0-presentation")
@with_manifold
@bound_option
@click.option("--module-only", is_flag=True, help="Print only the graded module (input for 'stab fg').")
@pass_ctx
def conf_h0(ctx: Context, manifold_spec, group_spec, rho, bound, module_only):
    """Graded presentation of Bredon H_0 of C(M) with constant Z coefficients."""
    from .conf import bredon_h0_presentation
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    P = bredon_h0_presentation(M, ctx.bound("cardinality", bound if bound is not None else 12))
    ctx.emit(P.module.to_json() if module_only else P.to_json())


@conf_cmd.command("geometric-module")
@with_manifold
@click.option("--degree", type=int, default=0, show_default=True)
@bound_option
@click.option("--module-only", is_flag=True, help="Print the module instead of the finite-generation report.")
@pass_ctx
def conf_geometric(ctx: Context, manifold_spec, group_spec, rho, degree, bound, module_only):
    """Sum of H_d over components through the bound, with the fg report over P_G."""
    from .conf import geometric_module
    from .stability import fg_check_multigraded
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    mod = geometric_module(M, degree, ctx.bound("cardinality", bound if bound is not None else 12))
    ctx.emit(mod.to_json() if module_only else {"degree": degree, **fg_check_multigraded(mod).to_json()})


@conf_cmd.command("range-check")
@with_manifold
@click.option("--subgroup", "sub_spec", required=True)
@click.option("--dmax", type=int, required=True)
@click.option("--kmax", type=int, required=True)
@pass_ctx
def conf_range(ctx: Context, manifold_spec, group_spec, rho, sub_spec, dmax, kmax):
    """Check which stabilization maps sigma_{G/H} are isomorphisms in degrees d <= k/2."""
    from .conf import stability_range_check
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    ctx.emit(stability_range_check(M, _subgroup(M.group, sub_spec), dmax, kmax).to_json())


# stab ----------------------------------------------------------------------------

@main.group("stab")
def stab_cmd():
    """Stabilization and finite generation."""


@stab_cmd.command("check-seq")
@click.option("--seq", "seq_spec", required=True, help="Graded sequence JSON.")
@click.option("--window", type=int, default=1, show_default=True)
@pass_ctx
def stab_check_seq(ctx: Context, seq_spec: str, window: int):
    """Eventual isomorphism, cokernel profile and (if stable) generators over Z[sigma]."""
    from .stability import GradedSequence, check_stabilization, cokernel_profile, fg_witness_from_stability
    seq = GradedSequence.from_json(ctx.read(seq_spec, "sequence"))
    rep = check_stabilization(seq, window)
    out = rep.to_json()
    out["cokernels"] = [{"n": n, **A.to_json()} for n, A in cokernel_profile(seq).items()]
    if rep.stable:
        out["generators"] = fg_witness_from_stability(seq, rep).to_json()
    ctx.emit(out)


@stab_cmd.command("fg")
@click.option("--module", "module_spec", required=True, help="Module JSON (e.g. from 'conf h0-presentation').")
@click.option("--ring", "ring_spec", default=None,
              help="Comma-separated operator names; default all operators.")
@click.option("--window", type=int, default=None)
@pass_ctx
def stab_fg(ctx: Context, module_spec: str, ring_spec: str | None, window: int | None):
    """Finite-generation semi-decision over the chosen operators."""
    from .stability import Monomial, fg_check_multigraded, parse_module
    data = ctx.read(module_spec)
    if isinstance(data, dict) and isinstance(data.get("module"), dict):
        data = data["module"]
    validate(data, "module")
    mod = parse_module(data)
    ring = None
    if ring_spec:
        names = [r.strip() for r in ring_spec.split(",") if r.strip()]
        known = {op.name: op for op in mod.operators.values()}
        unknown = [n for n in names if n not in known]
        if unknown:
            raise ValidationError(f"unknown operators {unknown}; available: {sorted(known)}")
        ring = [Monomial.single(known[n]) for n in names]
    ctx.emit(fg_check_multigraded(mod, ring, window).to_json())


@stab_cmd.command("restrict")
@group_option
@click.option("--to", "to_spec", required=True)
@pass_ctx
def stab_restrict(ctx: Context, group_spec: str, to_spec: str):
    """Images of the generators of P_G in P_K."""
    from .stability import restrict_polynomial
    G = _group(ctx, group_spec)
    ctx.emit(restrict_polynomial(G, _subgroup(G, to_spec)).to_json())


@stab_cmd.command("mackey-fg")
@with_manifold
@bound_option
@pass_ctx
def stab_mackey_fg(ctx: Context, manifold_spec, group_spec, rho, bound):
    """Levelwise finite generation of H_0 over P_G."""
    from .conf import h0_level_modules
    from .stability import mackey_fg_check
    M = _manifold(ctx, manifold_spec, group_spec, rho)
    levels = h0_level_modules(M, ctx.bound("cardinality", bound if bound is not None else 12))
    ctx.emit(mackey_fg_check(M.group, levels, M.ambient).to_json())


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and return the exit code instead of exiting."""
    try:
        args = list(sys.argv[1:] if argv is None else argv)
        main.main(args=args, prog_name="equistab", standalone_mode=False, obj=args)
        return 0
    except EquistabError as exc:
        click.echo(json.dumps({"error": exc.code, "message": str(exc)}), err=True)
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.exceptions.Abort:
        return 1


def entry() -> None:
    sys.exit(run())
