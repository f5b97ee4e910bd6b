"""``rigidlab`` command-line entry point.

Every subcommand writes one JSON object (or an equivalent ``key: value``
listing with ``--format text``) that embeds a run manifest.  Exit status is
0 on success, 2 on usage or input errors and 3 when a Groebner computation
exceeds its resource limits.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

from . import __version__, census, geometry, groebner, numeric, rigidity, varieties
from .exactpoly import MonomialOrder, PolynomialSyntaxError, VarTable, parse, polys
from .graphs import GraphFormatError, load_graph

EXIT_USAGE = 2
EXIT_LIMIT = 3


class UsageError(ValueError):
    pass


def _csv(text: str) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _int_list(text: str) -> List[int]:
    try:
        return [int(s) for s in _csv(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _limits(args) -> groebner.Limits:
    limits = groebner.Limits.from_env()
    if getattr(args, "limit", None):
        limits = groebner.Limits(args.limit, limits.max_basis)
    return limits


def _order(spec: str) -> MonomialOrder:
    if spec in ("lex", "grevlex"):
        return MonomialOrder(spec)
    if spec.startswith("block:"):
        return MonomialOrder.block(int(spec.split(":", 1)[1]))
    raise UsageError(f"unknown order {spec!r}; use lex, grevlex or block:K")


def _read_polys(args, vars: VarTable):
    if args.polys and args.file:
        raise UsageError("give either --polys or --file, not both")
    if args.file:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    elif args.polys:
        text = args.polys
    else:
        raise UsageError("need --polys or --file")
    out = polys(text, vars)
    if not out:
        raise UsageError("no polynomials given")
    return out


def _fraction_json(x: Fraction) -> str:
    return str(x)


# subcommands --------------------------------------------------------------------

def cmd_cm(args) -> dict:
    if args.ideal is not None:
        gens = geometry.cm_ideal_generators(args.ideal, args.dim)
        return {
            "n": args.ideal,
            "d": args.dim,
            "generator_count": len(gens),
            "generators": [str(g) for g in gens] if args.show else None,
            "terms": [len(g) for g in gens],
        }
    if not args.points:
        raise UsageError("cm needs --points FILE or --ideal N")
    pts = census.read_points(args.points)
    config = {str(i): (float(x), float(y)) for i, (x, y) in enumerate(pts)}
    dists = geometry.squared_distances(config)
    subset = _int_list(args.subset) if args.subset else list(range(dists.n))
    realizable, rank = geometry.gram_rank_check(dists, args.dim, args.tol or 1e-9)
    return {
        "n": dists.n,
        "subset": subset,
        "determinant": _fraction_json(geometry.cm_determinant(dists, subset)),
        "gram": {"realizable": realizable, "rank": rank, "d": args.dim},
    }


def cmd_laman(args) -> dict:
    g = load_graph(args.graph)
    indep = rigidity.independent_edges(g)
    return {
        "vertices": g.n,
        "edges": g.m,
        "count_ok": rigidity.laman_count(g),
        "full_ok": rigidity.laman_full(g),
        "independent_edges": sum(indep),
    }


def cmd_rank(args) -> dict:
    g = load_graph(args.graph)
    rank = rigidity.generic_rank(g, args.trials, args.seed)
    return {"generic_rank": rank, "dof": 2 * g.n - 3 - rank, "laman_bound": 2 * g.n - 3}


def _system(args):
    g = load_graph(args.graph)
    pin = None
    if getattr(args, "pin", None):
        a, b = _csv(args.pin)
        pin = varieties.Pinning(a, b)
    return g, varieties.build_unit_system(g, pin)


def cmd_system(args) -> dict:
    g, sys_ = _system(args)
    if args.cm:
        sys_ = varieties.cm_distance_system(g)
    nv, ne, slack = varieties.laman_variable_audit(sys_)
    return {
        "model": "distance" if args.cm else "coordinates",
        "vars": list(sys_.vars.names),
        "equations": [str(e) for e in sys_.equations],
        "audit": {"vars": nv, "eqs": ne, "slack": slack},
    }


def cmd_groebner(args) -> dict:
    vars = VarTable(_csv(args.vars))
    gens = _read_polys(args, vars)
    order = _order(args.order)
    basis = groebner.buchberger(gens, order, _limits(args))
    out = {"order": args.order, "basis": [str(g) for g in basis.generators], "pairs": basis.stats.get("pairs")}
    if args.member:
        out["member"] = not groebner.normal_form(parse(args.member, vars), basis)
    return out


def cmd_eliminate(args) -> dict:
    vars = VarTable(_csv(args.vars))
    gens = _read_polys(args, vars)
    drop = _csv(args.drop)
    basis = groebner.eliminate(gens, drop, _limits(args))
    out = {"drop": drop, "basis": [str(g) for g in basis.generators], "pairs": basis.stats.get("pairs")}
    if args.member:
        out["member"] = not groebner.normal_form(parse(args.member, vars), basis)
    return out


def cmd_verify_eq1(args) -> dict:
    modes = ["factorization", "membership"] if args.mode == "both" else [args.mode]
    reports = [varieties.verify_eq1(m, _limits(args)) for m in modes]
    if len(reports) == 1:
        return reports[0].to_json()
    return {"holds": all(r.holds for r in reports), "reports": [r.to_json() for r in reports]}


def _solve(args):
    g, sys_ = _system(args)
    if args.start:
        start = [float(s) for s in _csv(args.start)]
    else:
        start = numeric.attempt_seed(sys_, args.seed, 0)
    sol = numeric.newton_solve(sys_, start, args.tol or numeric.SOLVE_TOL, args.max_iter)
    return sys_, sol


def cmd_solve(args) -> dict:
    sys_, sol = _solve(args)
    out = sol.to_json()
    out["vars"] = list(sys_.vars.names)
    return out


def cmd_dim(args) -> dict:
    sys_, sol = _solve(args)
    out = {"converged": sol.converged, "residual": sol.residual, "x": sol.x}
    out["local_dimension"] = numeric.local_dimension(sys_, sol) if sol.converged else None
    return out


def cmd_collapse(args) -> dict:
    g = load_graph(args.graph)
    report = numeric.collapse_experiment(
        g, args.attempts, args.seed, args.merge_tol, args.tol or numeric.SOLVE_TOL, args.max_iter, name=args.graph
    )
    return report.to_json()


def cmd_curve(args) -> dict:
    pts = numeric.sample_flatness_curve(args.x2, args.count)
    return {"x2": args.x2, "count": len(pts), "points": [list(p) for p in pts]}


def cmd_census(args) -> dict:
    if args.points:
        pts = census.read_points(args.points)
        source = {"points": args.points}
    elif args.generator == "lattice":
        pts = census.lattice_config(args.side, args.radius_sq)
        source = {"generator": "lattice", "side": args.side, "radius_sq": args.radius_sq}
    elif args.generator == "lines":
        pts = census.lines_config(args.n, args.k, args.seed)
        source = {"generator": "lines", "n": args.n, "k": args.k}
    elif args.generator == "random":
        pts = census.random_config(args.n, args.seed)
        source = {"generator": "random", "n": args.n}
    else:
        raise UsageError("census needs --generator or --points")
    out = {
        **source,
        "n": len(pts),
        "count": census.count_unit_pairs(pts, args.eps),
        "duplicates": census.duplicate_count(pts),
    }
    if args.brute:
        out["brute_count"] = census.count_unit_pairs_brute(pts, args.eps)
    return out


def cmd_scaling(args) -> dict:
    return census.scaling_report(
        args.generator, args.sizes, args.seed, args.repeats, args.eps, args.k, args.radius_sq
    )


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", metavar="FILE")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--limit", type=int, help="maximum number of S-pairs")

    p = argparse.ArgumentParser(prog="rigidlab", description="Unit-distance varieties and rigidity toolkit.")
    p.add_argument("--version", action="version", version=f"rigidlab {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("cm", cmd_cm, "Cayley-Menger determinant and Gram rank of a point file")
    sp.add_argument("--points")
    sp.add_argument("--subset", help="comma-separated 0-based point indices")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--ideal", type=int, metavar="N", help="build the symbolic CM generators for N points")
    sp.add_argument("--show", action="store_true", help="print the generator polynomials")

    sp = add("laman", cmd_laman, "Laman count and pebble-game check")
    sp.add_argument("--graph", required=True)

    sp = add("rank", cmd_rank, "generic rigidity-matrix rank")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--trials", type=int, default=3)

    sp = add("system", cmd_system, "pinned unit-distance equations")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--pin", help="origin,axis vertex ids")
    sp.add_argument("--cm", action="store_true", help="distance-space model with Cayley-Menger generators")

    for name, func in (("groebner", cmd_groebner), ("eliminate", cmd_eliminate)):
        sp = add(name, func, f"{name} for polynomials in the text grammar")
        sp.add_argument("--vars", required=True, help="comma-separated variable names")
        sp.add_argument("--polys", help="polynomials separated by ';'")
        sp.add_argument("--file", help="file with one polynomial per line")
        sp.add_argument("--member", help="test membership of this polynomial")
        if name == "groebner":
            sp.add_argument("--order", default="grevlex")
        else:
            sp.add_argument("--drop", required=True, help="comma-separated variables to eliminate")

    sp = add("verify-eq1", cmd_verify_eq1, "check the eight-term locus polynomial")
    sp.add_argument("--mode", choices=("membership", "factorization", "both"), default="both")

    for name, func in (("solve", cmd_solve), ("dim", cmd_dim)):
        sp = add(name, func, "Newton solve" if name == "solve" else "local dimension at a Newton solution")
        sp.add_argument("--graph", required=True)
        sp.add_argument("--pin")
        sp.add_argument("--start", help="comma-separated starting values")
        sp.add_argument("--max-iter", type=int, default=numeric.MAX_ITER)

    sp = add("collapse", cmd_collapse, "degeneracy census of random Newton solutions")
    sp.add_argument("--graph", default="builtin:k33")
    sp.add_argument("--attempts", type=int, default=1000)
    sp.add_argument("--merge-tol", type=float, default=numeric.MERGE_TOL)
    sp.add_argument("--max-iter", type=int, default=numeric.MAX_ITER)

    sp = add("curve", cmd_curve, "sample the locus curve of the third centre")
    sp.add_argument("--x2", type=float, default=1.0)
    sp.add_argument("--count", type=int, default=101)

    sp = add("census", cmd_census, "count unit-distance pairs")
    sp.add_argument("--generator", choices=("lattice", "lines", "random"))
    sp.add_argument("--points")
    sp.add_argument("--side", type=int, default=10)
    sp.add_argument("--radius-sq", type=int, default=5)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--k", type=int, default=10)
    sp.add_argument("--eps", type=float, default=census.DEFAULT_EPS)
    sp.add_argument("--brute", action="store_true", help="also run the all-pairs oracle")

    sp = add("scaling", cmd_scaling, "unit counts over growing sizes")
    sp.add_argument("--generator", choices=("lattice", "lines", "random"), required=True)
    sp.add_argument("--sizes", type=_int_list, required=True, help="ascending sizes (grid sides for lattice)")
    sp.add_argument("--k", type=int, default=10)
    sp.add_argument("--radius-sq", type=int, default=5)
    sp.add_argument("--repeats", type=int, default=1)
    sp.add_argument("--eps", type=float, default=census.DEFAULT_EPS)
    return p


_NON_PARAMS = {"func", "format", "output", "subcommand"}


def _to_text(report: dict, prefix: str = "") -> List[str]:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.extend(_to_text(value, f"{prefix}{key}."))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(value)}")
    return lines


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        result = args.func(args)
    except groebner.ResourceLimitError as exc:
        print(f"rigidlab: resource limit: {exc}", file=stderr)
        return EXIT_LIMIT
    except (UsageError, GraphFormatError, PolynomialSyntaxError, census.PointSetFormatError,
            rigidity.GraphTooLargeError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"rigidlab: error: {msg}", file=stderr)
        return EXIT_USAGE
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _NON_PARAMS}
    report = {
        **{k: v for k, v in result.items() if v is not None},
        "manifest": {
            "subcommand": args.subcommand,
            "params": params,
            "seed": args.seed,
            "version": __version__,
            "wall_time": round(time.perf_counter() - start, 6),
        },
    }
    if args.format == "json":
        text = json.dumps(report, indent=2)
    else:
        body = report
        if args.subcommand == "scaling":
            body = {k: v for k, v in report.items() if k != "rows"}
        text = "\n".join(_to_text(body))
        if args.subcommand == "scaling":
            text = census.format_table(report) + "\n" + text
            text += "\nrows: " + json.dumps(report["rows"])
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
