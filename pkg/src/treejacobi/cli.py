"""Command-line front end wiring the toolkit together.

Every subcommand renders a list of (field, value) rows either as an
aligned table (9 significant digits) or as ``field,value`` CSV at full
precision, so the two formats always agree.  Exit codes: 0 success, 1
input/validation problems, 2 numerical failures.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import gap as gapmod
from . import graphs, green_models, mfunction, rgmodel, spectral
from .cover import BallBudgetError, build_ball, lanczos_top
from .graphs import GraphError


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as exit-code-1 errors."""

    def error(self, message):
        raise CliUsageError(message)


def _fmt_table(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, complex):
        return f"{value.real:.9g}{value.imag:+.9g}i"
    return str(value)


def _fmt_csv(value) -> str:
    # coerce numpy scalars so the repr round-trips through float()/complex()
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, complex):
        return repr(complex(value))  # "(re+imj)" round-trips
    return str(value)


def _emit_rows(rows, fmt, out):
    if fmt == "table":
        width = max(len(k) for k, _ in rows)
        text = "\n".join(f"{k.ljust(width)}  {_fmt_table(v)}" for k, v in rows)
    else:
        lines = ["field,value"]
        for k, v in rows:
            lines.append(f"{k},{_fmt_csv(v)}")
        text = "\n".join(lines)
    _write(text + "\n", out)


def _write(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_model(spec: str):
    """Build one of the closed-form base graphs from 'name:args'."""
    try:
        name, _, argstr = spec.partition(":")
        if name == "free":
            return graphs.free_model(int(argstr))
        if name == "rg":
            r, g = (int(x) for x in argstr.split(","))
            return graphs.rg_model(r, g)
        if name == "altb":
            return graphs.alternating_model(float(argstr))
    except (ValueError, GraphError) as exc:
        raise CliUsageError(f"bad model spec {spec!r}: {exc}") from None
    raise CliUsageError(f"unknown model {name!r} (expected free:d, rg:r,g or altb:b)")


def _load_graph(args):
    if getattr(args, "model", None):
        return _parse_model(args.model)
    if getattr(args, "graph", None):
        with open(args.graph) as fh:
            return graphs.parse_graph(fh.read())
    raise CliUsageError("provide a graph file or --model")


def _parse_range(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise CliUsageError(f"bad range {text!r}; expected lo,hi") from None
    if lo >= hi:
        raise CliUsageError("range must satisfy lo < hi")
    return lo, hi


def _parse_eps(text):
    try:
        eps = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise CliUsageError(f"bad eps list {text!r}") from None
    if any(e <= 0 for e in eps) or len(eps) < 2:
        raise CliUsageError("eps schedule needs at least two positive values")
    return eps


def _scan_kwargs(args):
    kw = {}
    if args.range:
        kw["x_range"] = _parse_range(args.range)
    if args.resolution:
        if args.resolution < 10:
            raise CliUsageError("resolution must be at least 10")
        kw["resolution"] = args.resolution
    if args.eps:
        kw["eps_schedule"] = _parse_eps(args.eps)
    return kw


# --------------------------------------------------------------------------
# subcommands


def _cmd_validate(args):
    with open(args.graph) as fh:
        graph, params = graphs.parse_graph(fh.read())
    rows = [
        ("status", "ok"),
        ("vertices", graph.p),
        ("edges", graph.q),
        ("bipartite", "yes" if graphs.is_bipartite(graph).is_bipartite else "no"),
    ]
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_perron(args):
    graph, params = _load_graph(args)
    pair = spectral.perron(graph, params)
    rows = [("sigma", pair.sigma)]
    rows += [(f"psi:{v}", pair.psi[v]) for v in graph.vertices]
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_spectrum(args):
    graph, params = _load_graph(args)
    report = mfunction.spectrum_scan(graph, params, **_scan_kwargs(args))
    rows = [("bands", len(report.bands))]
    for k, (lo, hi) in enumerate(report.bands, start=1):
        rows += [(f"band{k}.lo", lo), (f"band{k}.hi", hi)]
    rows.append(("point_masses", len(report.point_masses)))
    for k, (x, w) in enumerate(report.point_masses, start=1):
        rows += [(f"mass{k}.x", x), (f"mass{k}.weight", w)]
    rows += [("Sigma", report.Sigma), ("Sigma_minus", report.Sigma_minus)]
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_dos(args):
    graph, params = _load_graph(args)
    ig = graphs.indexed(graph, params)
    bound = spectral.gershgorin_bound(graph, params)
    lo, hi = _parse_range(args.range) if args.range else (-bound - 1.0, bound + 1.0)
    n = args.resolution or 201
    if n < 10:
        raise CliUsageError("resolution must be at least 10")
    eps_list = _parse_eps(args.eps) if args.eps else (1e-2, 1e-3, 1e-4)
    xs = np.linspace(lo, hi, n)
    if args.format == "csv":
        lines = ["x,density,eps_used"]
        for eps in eps_list:
            dens, _ = mfunction._grid_density_with_failures(ig, xs, eps)
            lines += [f"{float(x)!r},{float(d)!r},{eps!r}" for x, d in zip(xs, dens)]
        _write("\n".join(lines) + "\n", args.out)
        return 0
    cols = {eps: mfunction._grid_density_with_failures(ig, xs, eps)[0] for eps in eps_list}
    header = "x".ljust(16) + "".join(f"eps={eps:g}".rjust(16) for eps in eps_list)
    lines = [header]
    for i, x in enumerate(xs):
        lines.append(f"{x:<16.9g}" + "".join(f"{cols[eps][i]:>16.9g}" for eps in eps_list))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_gap_report(args):
    graph, params = _load_graph(args)
    report = gapmod.gap_report(graph, params, scan_kwargs=_scan_kwargs(args))
    rows = [("sigma", report.sigma), ("Sigma", report.Sigma), ("gap", report.gap)]
    if report.sigma_minus is not None:
        rows += [
            ("sigma_minus", report.sigma_minus),
            ("Sigma_minus", report.Sigma_minus),
            ("gap_minus", report.gap_minus),
        ]
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_gap_bounds(args):
    with open(args.graph) as fh:
        graph, params = graphs.parse_graph(fh.read())
    with open(args.tilde) as fh:
        graph_t, params_t = graphs.parse_graph(fh.read())
    if graph != graph_t:
        raise CliUsageError("the two files must describe the same graph (only parameters may differ)")
    kw = {"scan_kwargs": _scan_kwargs(args)}
    if args.reference_gap is not None:
        key = "reference_gap_minus" if args.minus else "reference_gap"
        kw[key] = args.reference_gap
    fn = gapmod.gap_minus_quantities if args.minus else gapmod.gap_quantities
    bounds = fn(graph, params, params_t, **kw)
    rows = [
        ("S", bounds.S), ("I", bounds.I),
        ("S_tilde", bounds.S_tilde), ("I_tilde", bounds.I_tilde),
        ("reference_gap", bounds.reference_gap),
        ("lower", bounds.lower), ("upper", bounds.upper),
    ]
    _emit_rows(rows, args.format, args.out)
    return 0


def _green_model(args):
    name, _, argstr = args.model.partition(":")
    try:
        if name == "free":
            return green_models.FreeModel(int(argstr))
        if name == "rg":
            r, g = (int(x) for x in argstr.split(","))
            return green_models.RGModel(r, g, args.site or "red")
        if name == "altb":
            return green_models.AltBModel(float(argstr), args.site or "plus")
    except ValueError as exc:
        raise CliUsageError(f"bad model spec {args.model!r}: {exc}") from None
    raise CliUsageError(f"unknown model {name!r} (expected free:d, rg:r,g or altb:b)")


def _cmd_green(args):
    model = _green_model(args)
    rows = []
    if args.z is not None:
        try:
            parts = args.z.split(",")
            z = complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
        except ValueError:
            raise CliUsageError(f"bad z {args.z!r}; expected re or re,im") from None
        value = green_models.evaluate(model, green_models.SheetedPoint(z, args.sheet))
        rows += [("z", z), ("sheet", args.sheet), ("G", value)]
    if args.audit is not None:
        audit = green_models.pole_audit(model, args.audit)
        rows.append(("audit.z0", audit.z0))
        for sheet, finding in (("I", audit.sheet_I), ("II", audit.sheet_II)):
            rows.append((f"sheet_{sheet}.kind", finding.kind))
            if finding.residue is not None:
                rows.append((f"sheet_{sheet}.residue", finding.residue))
            if finding.value is not None:
                rows.append((f"sheet_{sheet}.value", finding.value))
    if not rows:
        raise CliUsageError("give a z to evaluate and/or --audit z0")
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_rg_verify(args):
    r, g, depth = args.r, args.g, args.depth
    partial, limit = rgmodel.u_norm_sq(r, g, depth)
    residual = rgmodel.verify_Hu_zero(r, g, depth)
    residue, expected = rgmodel.residue_check(r, g)
    weight = rgmodel.dos_zero_weight(r, g)
    rows = [
        ("norm_sq_partial", partial),
        ("norm_sq_limit", limit),
        ("Hu_max_residual", residual),
        ("residue_at_zero", residue),
        ("residue_expected", expected),
        ("dos_weight", weight),
        ("dos_weight_expected", (r - g) / (r + g)),
    ]
    _emit_rows(rows, args.format, args.out)
    return 0


def _cmd_ball_eig(args):
    graph, params = _load_graph(args)
    base = args.base or graph.vertices[0]
    if base not in graph.vertices:
        raise CliUsageError(f"unknown base vertex {base!r}")
    ball = build_ball(graph, params, base, args.radius)
    rows = [
        ("radius", args.radius),
        ("base", base),
        ("nodes", ball.n_nodes),
        ("top_eigenvalue", lanczos_top(ball)),
    ]
    _emit_rows(rows, args.format, args.out)
    return 0


# --------------------------------------------------------------------------
# wiring


def _add_common(sub, graph_arg=True, model=True, scan=False):
    if graph_arg:
        sub.add_argument("graph", nargs="?" if model else None,
                         help="graph file (vertex/edge lines)")
    if model:
        sub.add_argument("--model", help="built-in model: free:d, rg:r,g or altb:b")
    if scan:
        sub.add_argument("--range", help="scan range lo,hi")
        sub.add_argument("--resolution", type=int, help="grid points across the range")
        sub.add_argument("--eps", help="broadening schedule e1,e2,...")
    sub.add_argument("--format", choices=("table", "csv"), default="table")
    sub.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treejacobi",
                     description="Spectra of periodic Jacobi operators on tree covers")
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("validate", help="parse and validate a graph file")
    p.add_argument("graph")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_validate)

    p = cmds.add_parser("perron", help="top eigenpair of the finite matrix")
    _add_common(p)
    p.set_defaults(fn=_cmd_perron)

    p = cmds.add_parser("spectrum", help="bands, point masses and extrema of the tree operator")
    _add_common(p, scan=True)
    p.set_defaults(fn=_cmd_spectrum)

    p = cmds.add_parser("dos", help="smoothed density-of-states profiles")
    _add_common(p, scan=True)
    p.set_defaults(fn=_cmd_dos)

    p = cmds.add_parser("gap-report", help="sigma, Sigma and the spectral gap")
    _add_common(p, scan=True)
    p.set_defaults(fn=_cmd_gap_report)

    p = cmds.add_parser("gap-bounds", help="two-sided gap comparison bounds")
    p.add_argument("graph", help="base parameter file")
    p.add_argument("tilde", help="comparison parameter file on the same graph")
    p.add_argument("--reference-gap", type=float,
                   help="closed-form comparison gap (skips the scan)")
    p.add_argument("--minus", action="store_true",
                   help="bound the bottom-of-spectrum gap (bipartite only)")
    p.add_argument("--range", help="scan range lo,hi")
    p.add_argument("--resolution", type=int)
    p.add_argument("--eps", help="broadening schedule e1,e2,...")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_gap_bounds)

    p = cmds.add_parser("green", help="closed-form Green's functions on either sheet")
    p.add_argument("z", nargs="?", help="evaluation point re or re,im")
    p.add_argument("--model", required=True, help="free:d, rg:r,g or altb:b")
    p.add_argument("--site", choices=("red", "green", "plus", "minus"))
    p.add_argument("--sheet", choices=("I", "II"), default="I")
    p.add_argument("--audit", type=float, metavar="Z0",
                   help="classify this energy on both sheets")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_green)

    p = cmds.add_parser("rg-verify", help="kernel eigenfunction checks for the biregular model")
    p.add_argument("r", type=int)
    p.add_argument("g", type=int)
    p.add_argument("--depth", type=int, default=4, help="truncation level K")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_rg_verify)

    p = cmds.add_parser("ball-eig", help="top eigenvalue of a truncated cover")
    _add_common(p)
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--base", help="base vertex id (default: first)")
    p.set_defaults(fn=_cmd_ball_eig)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 1
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (mfunction.SolverError, green_models.PoleEvaluationError,
            green_models.LimitInconsistencyError, BallBudgetError,
            RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
