"""Command line entry point: ``gramclosure <subcommand> ...``."""
import argparse
import sys

import numpy as np

from .baselines import Grid
from .closures import ClosureSpec, close
from .errors import ClosureError
from .experiments import fmt, load_config, run_convergence, run_sweep, write_csv
from .gauge import invariance_residuals
from .hyperbolicity import char_poly_analytic, char_poly_fd, poly_roots, verdict


def _moments(text):
    try:
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")


def _grid(text):
    try:
        lo, hi, n = text.split(",")
        return Grid(float(lo), float(hi), int(n))
    except (ValueError, ClosureError):
        raise argparse.ArgumentTypeError(f"grid must be 'lo,hi,points', got {text!r}")


def _spec(args):
    return ClosureSpec(args.closure, chi=args.chi, grid=getattr(args, "grid", None))


def _list(values):
    return ", ".join(fmt(v) for v in values)


def cmd_close(args, out):
    spec = _spec(args)
    res = close(args.moments, spec)
    M = len(args.moments) - 1
    print(f"u_{M + 1} = {fmt(res.u_next)}", file=out)
    if res.chi_used is not None:
        print(f"chi = {fmt(res.chi_used)}", file=out)
    if spec.is_gramian:
        print(f"verdict = {verdict(args.moments, spec).status}", file=out)


def cmd_hyperbolicity(args, out):
    spec = _spec(args)
    if args.fd:
        cp = char_poly_fd(args.moments, spec)
        roots = poly_roots(cp.poly)
        print(f"P coefficients (ascending) = {_list(cp.coeffs)}", file=out)
        print(f"roots = {_list(roots.roots)}", file=out)
        if not roots.all_real:
            print(f"nonreal roots = {', '.join(str(z) for z in roots.nonreal)}", file=out)
        return
    cp = char_poly_analytic(args.moments, spec)
    v = verdict(args.moments, spec)
    print(f"P coefficients (ascending) = {_list(cp.coeffs)}", file=out)
    for i, f in enumerate(cp.factors, 1):
        print(f"factor {i} coefficients (ascending) = {_list(f.coeffs)}", file=out)
    print(f"roots = {_list(v.roots.roots)}", file=out)
    if not v.roots.all_real:
        print(f"nonreal roots = {', '.join(str(z) for z in v.roots.nonreal)}", file=out)
    print(f"status = {v.status}", file=out)
    print(f"min_gap = {fmt(v.min_gap)}", file=out)
    if v.interlaced is not None:
        print(f"interlaced = {str(v.interlaced).lower()}", file=out)


def cmd_invariance(args, out):
    r = invariance_residuals(args.moments, _spec(args))
    print(f"r1 = {fmt(r.r1)}", file=out)
    print(f"r2 = {fmt(r.r2)}", file=out)
    print(f"r3 = {fmt(r.r3)}", file=out)
    print(f"scale = {fmt(r.scale)}", file=out)


def _run_study(args, out, runner):
    cfg = load_config(args.config)
    path = args.output or cfg.output_path
    if not path:
        raise ClosureError("no output path: pass --output or set output.path")
    rows = runner(cfg)
    write_csv(rows, path)
    print(f"wrote {len(rows)} rows to {path}", file=out)


def build_parser():
    p = argparse.ArgumentParser(prog="gramclosure",
                                description="Gramian moment closures and benchmarks")
    sub = p.add_subparsers(dest="command", required=True)

    def closure_args(sp, kinds_help):
        sp.add_argument("--moments", type=_moments, required=True,
                        help="comma separated u_0,...,u_M")
        sp.add_argument("--closure", required=True, help=kinds_help)
        sp.add_argument("--chi", type=float, default=None,
                        help="override chi of an extended closure")

    kinds = ("gramian-even, extended-even, gramian-odd, extended-odd")
    sp = sub.add_parser("close", help="predict u_{M+1}")
    closure_args(sp, kinds + ", grad, maxent")
    sp.add_argument("--grid", type=_grid, default=None,
                    help="maxent grid 'lo,hi,points'")
    sp.set_defaults(func=cmd_close)

    sp = sub.add_parser("hyperbolicity", help="characteristic polynomial and roots")
    closure_args(sp, kinds)
    sp.add_argument("--fd", action="store_true",
                    help="use the finite-difference Jacobian instead")
    sp.set_defaults(func=cmd_hyperbolicity)

    sp = sub.add_parser("invariance", help="gauge-invariance residuals r1, r2, r3")
    closure_args(sp, kinds)
    sp.set_defaults(func=cmd_invariance)

    for name, runner, help_ in (("sweep", run_sweep, "parameter sweep to CSV"),
                                ("converge", run_convergence, "convergence study to CSV")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True)
        sp.add_argument("--output", default=None)
        sp.set_defaults(func=lambda a, o, r=runner: _run_study(a, o, r))
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except (ClosureError, OSError) as exc:
        print(f"gramclosure {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
