"""Command-line front end.

Subcommands: kconst, energy, eig1, spectrum, sweep-s, sweep-p, homogenize,
certificate.  Each writes a machine-readable report (CSV and/or JSON) and
prints a one-line summary.  Exit codes: 0 success, 2 validation error,
3 solver non-convergence.

A JSON file of resolved options can be supplied with --config; explicit
command-line flags override it.  Every JSON report embeds its resolved
configuration, so a report can be reproduced from its own metadata.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import asymptotics, reports
from .eigensolve import (SolverOptions, first_eigenpair, first_eigenpair_weighted,
                         infinity_eigen_certificate, spectrum_linear)
from .functional import (NumericError, gagliardo_energy, k_constant,
                         weighted_energy)
from .geometry import GridFunction, build_box, build_interval, load_masked_grid
from .kernels import PeriodicProductKernel
from .params import FracParams
from .reports import format_float

__all__ = ["run", "main", "load_function_file", "parse_values"]


def parse_values(spec):
    """Parameter list from ``lo:hi:count`` (inclusive ends), a comma list,
    or a single number; already-parsed lists pass through."""
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    text = str(spec).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be lo:hi:count, got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"range count must be >= 1, got {count}")
        return [float(v) for v in np.linspace(lo, hi, count)]
    return [float(v) for v in text.split(",") if v.strip()]


def load_function_file(path, domain) -> GridFunction:
    """Grid function from a file of one value per line, interior nodes in
    row-major order."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) != domain.num_interior:
        raise ValueError(
            f"function file {path} has {len(lines)} values, "
            f"domain has {domain.num_interior} interior nodes")
    return GridFunction(domain, [float(ln) for ln in lines])


def save_function_file(path, u: GridFunction):
    Path(path).write_text(
        "\n".join(format_float(v) for v in u.values) + "\n")


def _build_domain(args):
    if args.domain == "interval":
        return build_interval(args.L, args.n)
    if args.domain == "box":
        return build_box(args.Lx, args.Ly, args.n)
    if args.domain == "masked":
        if not args.mask_file:
            raise ValueError("masked domain requires --mask-file")
        return load_masked_grid(args.mask_file)
    raise ValueError(f"unknown domain kind {args.domain!r}")


def _solver_options(args):
    return SolverOptions(
        max_iterations=args.max_iter, tolerance=args.tol,
        restarts=args.restarts, seed=args.seed)


def _kernel(args):
    if getattr(args, "kernel_frequency", None) is None:
        return None
    return PeriodicProductKernel(args.kernel_frequency,
                                 base=args.kernel_base,
                                 amplitude=args.kernel_amplitude)


_CONFIG_SKIP = {"func", "config"}


def _resolved_config(args):
    cfg = {"subcommand": args.subcommand}
    for key, val in sorted(vars(args).items()):
        if key in _CONFIG_SKIP or key == "subcommand" or callable(val):
            continue
        cfg[key] = val
    return cfg


def _emit(args, base_default, csv_text, json_doc, summary):
    base = args.output or base_default
    paths = reports.write_report(base, args.format, csv_text, json_doc)
    print(summary + ("  [" + ", ".join(paths) + "]" if paths else ""))


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"missing required option --{name.replace('_', '-')}")


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_kconst(args):
    if args.N is None or args.p is None:
        raise ValueError("kconst needs both N and p")
    value = k_constant(args.N, args.p)
    doc = reports.scalar_json_document(
        "kconst", {"value": value}, _resolved_config(args))
    _emit(args, "kconst", None, doc, format_float(value))
    return 0


def _cmd_energy(args):
    _require(args, 's', 'function')
    d = _build_domain(args)
    u = load_function_file(args.function, d)
    fp = FracParams(s=args.s, p=args.p)
    kern = _kernel(args)
    if kern is None:
        value = gagliardo_energy(u, fp)
        label = "gagliardo_energy"
    else:
        value = weighted_energy(u, fp, kern)
        label = "weighted_energy"
    doc = reports.scalar_json_document(
        "energy", {"value": value, "functional": label}, _resolved_config(args))
    _emit(args, "energy", None, doc, f"{label} = {format_float(value)}")
    return 0


def _cmd_eig1(args):
    _require(args, 's')
    d = _build_domain(args)
    fp = FracParams(s=args.s, p=args.p)
    kern = _kernel(args)
    opts = _solver_options(args)
    if kern is None:
        res = first_eigenpair(d, fp, opts)
    else:
        res = first_eigenpair_weighted(d, fp, kern, opts)
    if args.save_function:
        save_function_file(args.save_function, res.eigenfunction)
    doc = reports.scalar_json_document(
        "eig1", {"lambda": res.lam, "iterations": res.iterations,
                 "residual": res.residual, "converged": res.converged},
        _resolved_config(args))
    _emit(args, "eig1", None, doc,
          f"lambda_1 = {format_float(res.lam)} "
          f"({res.iterations} iterations, converged={res.converged})")
    return 0 if res.converged else 3


def _cmd_spectrum(args):
    _require(args, 's')
    d = _build_domain(args)
    pairs = spectrum_linear(d, args.s, args.k)
    lams = [lam for lam, _ in pairs]
    doc = reports.scalar_json_document(
        "spectrum", {"s": args.s, "eigenvalues": lams}, _resolved_config(args))
    _emit(args, "spectrum", reports.spectrum_csv(lams), doc,
          "lambda_1.." + str(args.k) + " = "
          + ", ".join(format_float(l) for l in lams))
    return 0


def _sweep_summary(report):
    tail = report.relative_errors[-1]
    extra = ""
    if report.extrapolated is not None:
        extra = f", extrapolated {format_float(report.extrapolated)}"
    return (f"{report.kind}: {len(report.parameters)} points, "
            f"reference {format_float(report.reference)}{extra}, "
            f"final rel_error {format_float(tail)}")


def _cmd_sweep_s(args):
    _require(args, 's')
    d = _build_domain(args)
    report = asymptotics.sweep_s(d, args.p, args.k, parse_values(args.s),
                                 _solver_options(args))
    doc = reports.sweep_json_document(report, _resolved_config(args))
    _emit(args, "sweep_s", reports.sweep_csv(report), doc,
          _sweep_summary(report))
    return 0


def _cmd_sweep_p(args):
    _require(args, 'alpha', 'p_values')
    d = _build_domain(args)
    report = asymptotics.sweep_p(d, args.alpha, parse_values(args.p_values),
                                 _solver_options(args))
    doc = reports.sweep_json_document(report, _resolved_config(args))
    _emit(args, "sweep_p", reports.sweep_csv(report), doc,
          _sweep_summary(report))
    return 0


def _cmd_homogenize(args):
    _require(args, 's', 'freqs')
    d = _build_domain(args)
    fp = FracParams(s=args.s, p=args.p)
    proto = PeriodicProductKernel(1, base=args.kernel_base,
                                  amplitude=args.kernel_amplitude)
    freqs = [int(v) for v in parse_values(args.freqs)]
    report = asymptotics.homogenization_sweep(d, fp, proto, freqs,
                                              _solver_options(args))
    doc = reports.sweep_json_document(report, _resolved_config(args))
    _emit(args, "homogenize", reports.sweep_csv(report), doc,
          _sweep_summary(report))
    return 0


def _cmd_certificate(args):
    _require(args, 'alpha')
    d = _build_domain(args)
    cert = infinity_eigen_certificate(d, args.alpha)
    doc = reports.scalar_json_document(
        "certificate", {"lambda": cert.lam, "certified": cert.certified,
                        "message": cert.message},
        _resolved_config(args))
    _emit(args, "certificate", None, doc,
          f"lambda_infinity = {format_float(cert.lam)} "
          f"(certified={cert.certified})")
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    domain_p = argparse.ArgumentParser(add_help=False)
    domain_p.add_argument("--domain", choices=["interval", "box", "masked"],
                          default="interval")
    domain_p.add_argument("--L", type=float, default=1.0,
                          help="interval length (interval domain)")
    domain_p.add_argument("--Lx", type=float, default=1.0)
    domain_p.add_argument("--Ly", type=float, default=1.0)
    domain_p.add_argument("--mask-file", default=None)
    domain_p.add_argument("--n", type=int, default=64,
                          help="subintervals per axis")

    out_p = argparse.ArgumentParser(add_help=False)
    out_p.add_argument("--output", default=None,
                       help="report path base (extension added per format)")
    out_p.add_argument("--format", choices=["csv", "json", "both"],
                       default="json")

    solver_p = argparse.ArgumentParser(add_help=False)
    solver_p.add_argument("--tol", type=float, default=1e-9)
    solver_p.add_argument("--max-iter", type=int, default=50_000)
    solver_p.add_argument("--restarts", type=int, default=0)
    solver_p.add_argument("--seed", type=int, default=None)

    kernel_p = argparse.ArgumentParser(add_help=False)
    kernel_p.add_argument("--kernel-frequency", type=int, default=None)
    kernel_p.add_argument("--kernel-base", type=float, default=2.0)
    kernel_p.add_argument("--kernel-amplitude", type=float, default=1.0)

    parser = argparse.ArgumentParser(
        prog="fraceig",
        description="Variational eigenvalues of nonlocal p-Laplacian operators")
    parser.add_argument("--config", default=None,
                        help="JSON file of resolved options (flags override)")
    sub = parser.add_subparsers(dest="subcommand")

    q = sub.add_parser("kconst", parents=[out_p],
                       help="gradient-limit constant K(N, p)")
    q.add_argument("N", type=int, nargs="?", default=None)
    q.add_argument("p", type=float, nargs="?", default=None)
    q.set_defaults(func=_cmd_kconst)

    q = sub.add_parser("energy", parents=[domain_p, out_p, kernel_p],
                       help="nonlocal energy of a function file")
    q.add_argument("--s", type=float, default=None)
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--function", default=None,
                   help="one value per line, interior nodes row-major")
    q.set_defaults(func=_cmd_energy)

    q = sub.add_parser("eig1", parents=[domain_p, out_p, solver_p, kernel_p],
                       help="first eigenpair by Rayleigh-quotient descent")
    q.add_argument("--s", type=float, default=None)
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--save-function", default=None)
    q.set_defaults(func=_cmd_eig1)

    q = sub.add_parser("spectrum", parents=[domain_p, out_p],
                       help="k smallest eigenvalues, p = 2")
    q.add_argument("--s", type=float, default=None)
    q.add_argument("--k", type=int, default=5)
    q.set_defaults(func=_cmd_spectrum)

    q = sub.add_parser("sweep-s", parents=[domain_p, out_p, solver_p],
                       help="eigenvalue sweep in s toward the local limit")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--s", default=None,
                   help="lo:hi:count range or comma list")
    q.set_defaults(func=_cmd_sweep_s)

    q = sub.add_parser("sweep-p", parents=[domain_p, out_p, solver_p],
                       help="lambda^(1/p) sweep toward the infinity eigenvalue")
    q.add_argument("--alpha", type=float, default=None)
    q.add_argument("--p-values", default=None,
                   help="lo:hi:count range or comma list")
    q.set_defaults(func=_cmd_sweep_p)

    q = sub.add_parser("homogenize", parents=[domain_p, out_p, solver_p],
                       help="oscillating-kernel eigenvalue sweep")
    q.add_argument("--s", type=float, default=None)
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--freqs", default=None,
                   help="oscillation frequencies, range or comma list")
    q.add_argument("--kernel-base", type=float, default=2.0)
    q.add_argument("--kernel-amplitude", type=float, default=1.0)
    q.set_defaults(func=_cmd_homogenize)

    q = sub.add_parser("certificate", parents=[domain_p, out_p],
                       help="Hölder-infinity eigenvalue and cone certificate")
    q.add_argument("--alpha", type=float, default=None)
    q.set_defaults(func=_cmd_certificate)

    return parser, dict(sub.choices)


def run(argv) -> int:
    argv = list(argv)
    parser, subparsers = _build_parser()

    config = None
    if "--config" in argv:
        i = argv.index("--config")
        try:
            config = json.loads(Path(argv[i + 1]).read_text())
        except (IndexError, OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        if not isinstance(config, dict) or "subcommand" not in config:
            print("error: config must be a JSON object with a 'subcommand' field",
                  file=sys.stderr)
            return 2
        del argv[i:i + 2]
        rest = dict(config)
        subcommand = rest.pop("subcommand")
        if subcommand not in subparsers:
            print(f"error: unknown subcommand in config: {subcommand!r}",
                  file=sys.stderr)
            return 2
        if not argv or argv[0] != subcommand:
            argv.insert(0, subcommand)
        # defaults must live on the subparser: it parses into its own
        # namespace and would otherwise shadow them with action defaults
        subparsers[subcommand].set_defaults(
            **{k: v for k, v in rest.items()
               if k in {a.dest for a in subparsers[subcommand]._actions}})

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
