"""Command-line experiments. Every command writes a CSV report.

Exit codes: 0 success, 2 invalid input, 1 numerical failure.
"""

import argparse
import contextlib
import os
import sys

import numpy as np

from . import cases
from .coercivity import coercivity_constant
from .errors import NumericalError, ValidationError
from .ode import figure_errors, solve_ode
from .projections import nodal_error, project_ph, project_qh
from .report import ConvergenceReport
from .spacetime import NORMS as ST_NORMS
from .spacetime import SpaceTimeProblem, solve_spacetime, spacetime_error, wave_case, zero_case
from .spline import build_space
from .ode import ode_error


def _int_list(s):
    return [int(v) for v in s.split(",") if v.strip()]


def _float_list(s):
    return [float(v) for v in s.split(",") if v.strip()]


def _regularity(s):
    if s == "max":
        return s
    try:
        return int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"regularity must be an integer or 'max', got {s!r}")


def _resolve_k(reg, p):
    k = p - 1 if reg == "max" else reg
    if not 1 <= k <= p - 1:
        raise ValidationError(f"regularity {k} is not admissible for p={p} (need 1 <= k <= p-1)")
    return k


def _check_levels(levels):
    if levels < 1:
        raise ValidationError(f"need at least one level, got {levels}")


def cmd_coercivity(a):
    _check_levels(a.levels)
    norm = a.norm.upper()
    rep = ConvergenceReport("coercivity", {"norm": norm, "regularity": "max", "N0": a.N0},
                            ["T", "p", "mu", "N", "h", "constant"])
    for T in a.T:
        for p in a.p:
            for mu in a.mu:
                for j in range(a.levels):
                    N = a.N0 * 2**j
                    space = build_space(T, N, p, p - 1, "left_zero")
                    rep.add(T, p, mu, N, T / N, coercivity_constant(space, mu, T, norm))
    return rep.to_csv()


def cmd_ode_converge(a):
    _check_levels(a.levels)
    exact = cases.get_case(a.case)
    norms = ("L2", "H1", "H2")
    rates = {}
    rep = ConvergenceReport("ode-converge", {"case": a.case, "T": a.T, "mu": a.mu,
                                             "regularity": a.regularity, "h0": a.h0},
                            ["p", "k", "N", "h"] + list(norms))
    for p in a.p:
        k = _resolve_k(a.regularity, p)
        sub = ConvergenceReport("", {}, ["h"] + list(norms))
        for j in range(a.levels):
            N = int(round(a.T / a.h0)) * 2**j
            space = build_space(a.T, N, p, k, "left_zero")
            sol = solve_ode(space, a.mu, a.T, exact)
            e = figure_errors(sol, exact, a.T, a.quad_points)
            rep.add(p, k, N, a.T / N, *(e[n] for n in norms))
            sub.add(a.T / N, *(e[n] for n in norms))
        rates.update({f"p{p}_{n}": r for n, r in sub.rates("h", norms).items()})
    return rep.to_csv(rates)


def cmd_projection_study(a):
    _check_levels(a.levels)
    rates = {}
    if a.mode == "nodal":
        rep = ConvergenceReport("projection-nodal", {"T": 1.0, "v": "t^(p+1)"},
                                ["p", "N", "h", "nodal_error"])
        for p in a.p:
            v = lambda t, p=p: np.asarray(t, dtype=float) ** (p + 1)
            sub = ConvergenceReport("", {}, ["h", "nodal_error"])
            for j in range(a.levels):
                N = 4 * 2**j
                err = nodal_error(v, project_ph(v, p, N, 1.0))
                rep.add(p, N, 1.0 / N, err)
                sub.add(1.0 / N, err)
            rates.update({f"p{p}_nodal": r for n, r in sub.rates("h", ["nodal_error"]).items()})
        return rep.to_csv(rates)
    exact = cases.get_case(a.case)
    rep = ConvergenceReport("projection-qh", {"case": a.case, "T": a.T, "h0": a.h0,
                                              "regularity_offset": a.regularity_offset},
                            ["p", "k", "N", "h", "H1"])
    for p in a.p:
        k = p - a.regularity_offset
        if k < 1:
            raise ValidationError(f"offset {a.regularity_offset} leaves regularity {k} < 1 for p={p}")
        sub = ConvergenceReport("", {}, ["h", "H1"])
        for j in range(a.levels):
            N = int(round(a.T / a.h0)) * 2**j
            space = build_space(a.T, N, p, k, "left_zero")
            err = ode_error(project_qh(exact, space), exact, 1, n_points=a.quad_points)
            rep.add(p, k, N, a.T / N, err)
            sub.add(a.T / N, err)
        rates.update({f"p{p}_H1": r for r in sub.rates("h", ["H1"]).values()})
    return rep.to_csv(rates)


def _pde_row(p, kt, kx, Nx, Nt, ex, quad):
    sx = build_space(1.0, Nx, p, kx, "both_ends_zero")
    st = build_space(1.0, Nt, p, kt, "left_zero")
    sol = solve_spacetime(SpaceTimeProblem(sx, st, ex.source, quad_points=quad))
    return [spacetime_error(sol, ex, n, n_points=quad) for n in ST_NORMS]


def cmd_pde(a):
    _check_levels(a.levels if a.mode == "converge" else a.sweeps)
    ex = wave_case() if a.case == "wave" else zero_case()
    rates = {}
    if a.mode == "stability":
        Nt = int(round(1.0 / a.ht))
        rep = ConvergenceReport("pde-stability", {"case": a.case, "ht": a.ht,
                                                  "reg_time": a.reg_time, "reg_space": a.reg_space},
                                ["p", "ratio", "hx", "ht"] + list(ST_NORMS))
        for p in a.p:
            kt, kx = _resolve_k(a.reg_time, p), _resolve_k(a.reg_space, p)
            for j in range(a.sweeps):
                Nx = Nt * 2**j
                rep.add(p, 2**j, 1.0 / Nx, 1.0 / Nt, *_pde_row(p, kt, kx, Nx, Nt, ex, a.quad_points))
        return rep.to_csv()
    rep = ConvergenceReport("pde-converge", {"case": a.case, "h0": a.h0,
                                             "reg_time": a.reg_time, "reg_space": a.reg_space},
                            ["p", "N", "h"] + list(ST_NORMS))
    for p in a.p:
        kt, kx = _resolve_k(a.reg_time, p), _resolve_k(a.reg_space, p)
        sub = ConvergenceReport("", {}, ["h"] + list(ST_NORMS))
        for j in range(a.levels):
            N = int(round(1.0 / a.h0)) * 2**j
            errs = _pde_row(p, kt, kx, N, N, ex, a.quad_points)
            rep.add(p, N, 1.0 / N, *errs)
            sub.add(1.0 / N, *errs)
        rates.update({f"p{p}_{n}": r for n, r in sub.rates("h", ST_NORMS).items()})
    return rep.to_csv(rates)


def build_parser():
    ap = argparse.ArgumentParser(prog="chrono", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--quad-points", type=int, default=None,
                        help="Gauss-Legendre points per element for errors (default p+6)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coercivity", parents=[common], help="discrete coercivity constants")
    c.add_argument("--T", type=_float_list, default=[1.0])
    c.add_argument("--p", type=_int_list, default=[2])
    c.add_argument("--mu", type=_float_list, default=[10.0])
    c.add_argument("--levels", type=int, default=8)
    c.add_argument("--N0", type=int, default=8)
    c.add_argument("--norm", choices=["h1", "h2", "H1", "H2"], default="h1")
    c.set_defaults(func=cmd_coercivity)

    o = sub.add_parser("ode-converge", parents=[common], help="ODE convergence study")
    o.add_argument("--p", type=_int_list, default=[2, 3, 4, 5, 6])
    o.add_argument("--regularity", type=_regularity, default="max")
    o.add_argument("--case", default="t2exp")
    o.add_argument("--mu", type=float, default=1e5)
    o.add_argument("--T", type=float, default=5.0)
    o.add_argument("--levels", type=int, default=4)
    o.add_argument("--h0", type=float, default=0.625)
    o.set_defaults(func=cmd_ode_converge)

    q = sub.add_parser("projection-study", parents=[common], help="projection errors")
    q.add_argument("--p", type=_int_list, default=[2, 3, 4, 5, 6])
    q.add_argument("--regularity-offset", type=int, choices=[1, 2, 3], default=1)
    q.add_argument("--levels", type=int, default=4)
    q.add_argument("--h0", type=float, default=0.625)
    q.add_argument("--T", type=float, default=5.0)
    q.add_argument("--case", default="sin2t")
    q.add_argument("--mode", choices=["qh", "nodal"], default="qh")
    q.set_defaults(func=cmd_projection_study)

    d = sub.add_parser("pde", parents=[common], help="space-time wave equation")
    d.add_argument("mode", choices=["stability", "converge"])
    d.add_argument("--p", type=_int_list, default=[2])
    d.add_argument("--reg-time", type=_regularity, default="max")
    d.add_argument("--reg-space", type=_regularity, default="max")
    d.add_argument("--ht", type=float, default=0.125)
    d.add_argument("--sweeps", type=int, default=10)
    d.add_argument("--h0", type=float, default=0.125)
    d.add_argument("--levels", type=int, default=4)
    d.add_argument("--case", choices=["wave", "zero"], default="wave")
    d.set_defaults(func=cmd_pde)
    return ap


def _thread_limit():
    n = os.environ.get("CHRONO_THREADS")
    if not n:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(limits=int(n))


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        with _thread_limit():
            text = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
