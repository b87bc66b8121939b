"""Command-line front end.

Exit codes: 0 success, 1 validation or usage error, 2 a numerical identity
or route comparison failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from typing import Sequence


from . import __version__
from .consensus_sim import LtiConsensusSystem, SimConfig, StabilityError, simulate_variance
from .generators import FAMILIES, FamilySpec, analytic_dimensions
from .graph import Graph, GraphError, format_edgelist, read_edgelist
from .pipeline import CLI_ROUTES, SWEEP_COLUMNS, compare_routes, fit_rows, sweep
from .scaling import ball_growth, estimate_fractal_dimension, leave_one_out_spread, spectral_dimension_fit
from .spectral import spectrum
from .tree_recursion import RecursionMismatch
from .verification import all_passed, verify_identities, verify_tree, verify_vicsek
from .vicsek_recursion import SpectrumInvariantError

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

REPORT_CSV_COLUMNS = (
    "label", "route", "N", "M", "beta", "S", "S2", "H_FO", "H_SO", "R_total", "F_gmfpt", "wiener",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def manifest(args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {
        "subcommand": args.command if args.command != "verify" else f"verify {args.suite}",
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _emit(text: str, dest: str | None) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv_text(rows: list[dict], columns: Sequence[str], man: dict) -> str:
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(man, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# -- graph selection ------------------------------------------------------------


def _add_graph_source(p: argparse.ArgumentParser, allow_input: bool = True) -> None:
    if allow_input:
        p.add_argument("--input", help="edge-list file ('-' for stdin)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--m", type=int, help="leaves per new node (tree)")
    p.add_argument("--v", type=int, help="corner count (vicsek)")
    p.add_argument("--g", type=int, help="generation (tree, vicsek)")
    p.add_argument("--n", type=int, help="node count (ring, path) or side length (torus)")


def _family_spec(args: argparse.Namespace) -> FamilySpec:
    fam = args.family
    if fam is None:
        raise UsageError("give --family (with its size flags) or --input")

    def need(name: str) -> int:
        val = getattr(args, name)
        if val is None:
            raise UsageError(f"--family {fam} needs --{name}")
        return val

    if fam == "tree":
        return FamilySpec("tree", need("g"), need("m"))
    if fam == "vicsek":
        return FamilySpec("vicsek", need("g"), need("v"))
    return FamilySpec(fam, need("n"))


def _graph_source(args: argparse.Namespace) -> tuple[FamilySpec | None, Graph]:
    if getattr(args, "input", None):
        if args.family is not None:
            raise UsageError("--input and --family are mutually exclusive")
        if args.input == "-":
            return None, read_edgelist(sys.stdin, label="stdin")
        return None, read_edgelist(args.input)
    spec = _family_spec(args)
    return spec, spec.build()


def _orders(order: str) -> tuple[str, ...]:
    return ("first", "second") if order == "both" else (order,)


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dt", type=float, help="time step (default 0.05 / (beta lam_max))")
    p.add_argument("--horizon", type=float, help="measurement time (default 200 / (beta lam_2))")
    p.add_argument("--burn-in", type=float, help="discarded time (default 10 / (beta lam_2))")
    p.add_argument("--replicates", type=int, default=None, help="independent runs (default 32)")
    p.add_argument("--seed", type=int, default=0)


def _sim_config(args: argparse.Namespace) -> SimConfig:
    kw = {"seed": args.seed}
    for name in ("dt", "horizon", "burn_in", "replicates"):
        val = getattr(args, name)
        if val is not None:
            kw[name] = val
    return SimConfig(**kw)


def _sim_flags_given(args: argparse.Namespace) -> bool:
    return any(getattr(args, k) is not None for k in ("dt", "horizon", "burn_in", "replicates"))


# -- subcommands ----------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    g = _family_spec(args).build()
    text = format_edgelist(g)
    if args.manifest:
        text += "# manifest " + json.dumps(manifest(args), sort_keys=True) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    _, g = _graph_source(args)
    sp = spectrum(g)
    man = manifest(args)
    if args.csv:
        rows = [{"index": i, "eigenvalue": repr(float(x))} for i, x in enumerate(sp.eigenvalues)]
        _emit(_csv_text(rows, ("index", "eigenvalue"), man), args.output)
    else:
        out = {
            "manifest": man,
            "label": g.label,
            "N": g.num_nodes,
            "M": g.num_edges,
            "eigenvalues": [float(x) for x in sp.eigenvalues],
            "S": sp.S,
            "S2": sp.S2,
        }
        _emit(_dump_json(out), args.output)
    return EXIT_OK


def cmd_coherence(args: argparse.Namespace) -> int:
    spec, g = (_family_spec(args), None) if not args.input else _graph_source(args)
    routes = CLI_ROUTES if args.route == "all" else (args.route,)
    if args.route == "recursion" and spec is None:
        raise UsageError("--route recursion needs --family tree or vicsek")
    if spec is not None and routes != ("recursion",):
        g = spec.build()
    sim = _sim_config(args) if _sim_flags_given(args) or args.route == "simulate" else None
    cmp = compare_routes(spec, g, args.beta, routes, _orders(args.order), sim)
    if not cmp.reports:
        raise UsageError("no route could run: " + "; ".join(f"{k}: {v}" for k, v in cmp.skipped.items()))
    man = manifest(args)
    if args.csv:
        _emit(_csv_text([r.to_dict() for r in cmp.reports], REPORT_CSV_COLUMNS, man), args.output)
    else:
        out = {
            "manifest": man,
            "reports": [r.to_dict() for r in cmp.reports],
            "checks": [c.to_dict() for c in cmp.checks],
            "skipped": cmp.skipped,
            "passed": cmp.passed,
        }
        _emit(_dump_json(out), args.output)
    for c in cmp.checks:
        if not c.passed:
            print(f"route mismatch: {c.route} {c.quantity} = {c.value:.12g} vs {c.reference:.12g} "
                  f"(rel {c.rel_err:.2e} > {c.tolerance:g})", file=sys.stderr)
    return EXIT_OK if cmp.passed else EXIT_INVARIANT


def cmd_simulate(args: argparse.Namespace) -> int:
    _, g = _graph_source(args)
    sp = spectrum(g)
    n = g.num_nodes
    config = _sim_config(args)
    estimates = {}
    for order in _orders(args.order):
        system = LtiConsensusSystem.from_graph(g, order, args.beta)
        est = simulate_variance(system, config)
        analytic = sp.S / (2 * args.beta * n) if order == "first" else sp.S2 / (2 * args.beta**2 * n)
        estimates[order] = {
            "h_hat": est.h_hat,
            "stderr": est.stderr,
            "analytic": analytic,
            "z_score": est.z_score(analytic),
            "rel_err": abs(est.h_hat - analytic) / analytic,
            "replicates": est.samples,
            "dt": est.dt,
            "burn_in_steps": est.burn_in_steps,
            "measure_steps": est.measure_steps,
            "replicate_means": list(est.replicate_means),
        }
    out = {"manifest": manifest(args), "label": g.label, "N": n, "beta": args.beta, "estimates": estimates}
    _emit(_dump_json(out), args.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.family in ("tree", "vicsek") and args.param is None:
        raise UsageError(f"--family {args.family} needs --param")
    if args.g_min > args.g_max:
        raise UsageError(f"--g-min {args.g_min} exceeds --g-max {args.g_max}")
    sizes = list(range(args.g_min, args.g_max + 1))
    param = args.param if args.family in ("tree", "vicsek") else None
    rows = sweep(args.family, param, sizes, args.beta, args.route, args.jobs)
    man = manifest(args)
    _emit(_csv_text(rows, SWEEP_COLUMNS, man), args.output)

    fits: dict[str, dict | str] = {}
    for order in _orders(args.order):
        key = "H_FO" if order == "first" else "H_SO"
        try:
            fit = fit_rows(rows, order)
            fits[key] = fit.to_dict()
            if len(rows) >= 4:
                fits[key]["leave_one_out_spread"] = leave_one_out_spread(list(fit.points))
        except ValueError as exc:
            fits[key] = f"no fit: {exc}"
    summary = {"manifest": man, "fits": fits}
    if args.family in ("tree", "vicsek"):
        d_f = analytic_dimensions(args.family, param).d_f
        summary["predicted"] = {"H_FO": 1.0 / d_f, "H_SO": 1.0 + 2.0 / d_f}
    text = _dump_json(summary)
    if args.fit_output:
        _emit(text, args.fit_output)
    else:
        sys.stderr.write(text)
    return EXIT_OK


def cmd_dimension(args: argparse.Namespace) -> int:
    spec, g = _graph_source(args)
    out: dict = {"manifest": manifest(args), "label": g.label, "N": g.num_nodes}
    prof = ball_growth(g, args.center)
    out["ball_growth"] = {
        "center": prof.center,
        "diameter": prof.diameter,
        "d_f": estimate_fractal_dimension(prof, r_min=args.r_min),
    }
    try:
        fit = spectral_dimension_fit(spectrum(g), args.fraction)
        out["spectral"] = {
            "d_s": fit.d_s, "x_low": fit.x_low, "x_high": fit.x_high,
            "window_points": fit.window_points, "r_squared": fit.r_squared,
        }
    except GraphError as exc:
        if "cap" not in str(exc):
            raise
        out["spectral"] = f"skipped: {exc}"
    if spec is not None:
        dims = analytic_dimensions(spec)
        out["analytic"] = {"d_f": dims.d_f, "d_s": dims.d_s}
    _emit(_dump_json(out), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite == "vicsek":
        checks = verify_vicsek(args.v, args.g_max)
    elif args.suite == "tree":
        checks = verify_tree(args.m, args.g_max)
    else:
        _, g = _graph_source(args)
        checks = verify_identities(g)
    lines = ["# manifest " + json.dumps(manifest(args), sort_keys=True)]
    lines += [c.line() for c in checks]
    ok = all_passed(checks)
    n_fail = sum(1 for c in checks if not c.passed and not c.informational)
    lines.append(f"{'ALL PASSED' if ok else f'{n_fail} FAILED'} ({len(checks)} checks)")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_INVARIANT


# -- parser ---------------------------------------------------------------------


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractal-coherence", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--max-nodes", type=int, help="node cap for generation (env FRACTAL_COHERENCE_MAX_NODES)")
    parser.add_argument("--max-eigen-nodes", type=int,
                        help="node cap for dense eigensolves (env FRACTAL_COHERENCE_MAX_EIGEN_NODES)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a family member as an edge list")
    _add_graph_source(p, allow_input=False)
    p.add_argument("--output", help="destination file (default stdout)")
    p.add_argument("--manifest", action="store_true", help="append the run manifest as a '#' comment line")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectrum", help="Laplacian eigenvalues with S and S2")
    _add_graph_source(p)
    p.add_argument("--csv", action="store_true", help="emit eigenvalues as CSV")
    p.add_argument("--output")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("coherence", help="coherence report by one or all routes")
    _add_graph_source(p)
    p.add_argument("--beta", type=_positive_float, default=1.0)
    p.add_argument("--order", choices=("first", "second", "both"), default="both")
    p.add_argument("--route", choices=CLI_ROUTES + ("all",), default="eigen")
    p.add_argument("--csv", action="store_true", help="one CSV row per route")
    p.add_argument("--output")
    _add_sim_flags(p)
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("simulate", help="Monte-Carlo coherence estimate")
    _add_graph_source(p)
    p.add_argument("--beta", type=_positive_float, default=1.0)
    p.add_argument("--order", choices=("first", "second", "both"), default="both")
    p.add_argument("--output")
    _add_sim_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="coherence over a range of sizes, CSV plus exponent fit")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--param", type=int, help="m (tree) or v (vicsek)")
    p.add_argument("--g-min", type=int, required=True, help="first generation (node count or side for baselines)")
    p.add_argument("--g-max", type=int, required=True)
    p.add_argument("--order", choices=("first", "second", "both"), default="both")
    p.add_argument("--beta", type=_positive_float, default=1.0)
    p.add_argument("--route", choices=("recursion", "eigen", "lyapunov"), default="recursion")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="CSV destination (default stdout)")
    p.add_argument("--fit-output", help="JSON fit summary destination (default stderr)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dimension", help="ball-growth and spectral dimension estimates")
    _add_graph_source(p)
    p.add_argument("--center", type=int, help="ball-growth center (default: a max-degree node)")
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--fraction", type=float, default=0.05, help="spectral window as a fraction of N")
    p.add_argument("--output")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("verify", help="identity suites with pass/fail lines")
    vs = p.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    q = vs.add_parser("vicsek")
    q.add_argument("--v", type=int, required=True)
    q.add_argument("--g-max", type=int, required=True)
    q.add_argument("--output")
    q = vs.add_parser("tree")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--g-max", type=int, required=True)
    q.add_argument("--output")
    q = vs.add_parser("identities", help="resistance, hitting-time and Wiener identities")
    _add_graph_source(q)
    q.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {
        "FRACTAL_COHERENCE_MAX_NODES": args.max_nodes,
        "FRACTAL_COHERENCE_MAX_EIGEN_NODES": args.max_eigen_nodes,
    }
    # caps apply for this call only, so in-process callers keep their environment
    saved = {k: os.environ.get(k) for k in overrides}
    for k, val in overrides.items():
        if val is not None:
            os.environ[k] = str(val)
    try:
        return args.func(args)
    except (RecursionMismatch, SpectrumInvariantError) as exc:
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, GraphError, StabilityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        for k, val in saved.items():
            if val is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = val

if __name__ == "__main__":
    sys.exit(main())
