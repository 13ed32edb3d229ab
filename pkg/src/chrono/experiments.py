"""Parameter sweeps behind the published table and figures."""

from .cases import get_case
from .coercivity import coercivity_constant
from .ode import figure_errors, ode_error, solve_ode
from .projections import project_qh
from .spacetime import NORMS as ST_NORMS
from .spacetime import SpaceTimeProblem, solve_spacetime, spacetime_error, wave_case
from .spline import build_space

ODE_T = 5.0
ODE_MU = 1e5
ODE_H0 = 0.625
ST_H0 = 0.125


def table1_column(T, p, mu, levels=8, N0=8):
    """H1 coercivity constants with maximal regularity for N = N0 * 2^j."""
    return [coercivity_constant(build_space(T, N0 * 2**j, p, p - 1, "left_zero"), mu, T)
            for j in range(levels)]


def ode_sweep(p, k, levels=4, case="t2exp", mu=ODE_MU, T=ODE_T, h0=ODE_H0):
    """{'L2': [...], 'H1': [...], 'H2': [...]} over h = h0 / 2^j."""
    u = get_case(case)
    out = {"L2": [], "H1": [], "H2": []}
    N0 = int(round(T / h0))
    for j in range(levels):
        space = build_space(T, N0 * 2**j, p, k, "left_zero")
        e = figure_errors(solve_ode(space, mu, T, u), u, T)
        for n in out:
            out[n].append(e[n])
    return out


def qh_sweep(p, k, levels=4, case="sin2t", T=ODE_T, h0=ODE_H0, route="auto"):
    u = get_case(case)
    N0 = int(round(T / h0))
    return [ode_error(project_qh(u, build_space(T, N0 * 2**j, p, k, "left_zero"), route=route), u, 1)
            for j in range(levels)]


def spacetime_run(p, Nx, Nt, kt=None, kx=None, exact=None):
    exact = exact or wave_case()
    sx = build_space(1.0, Nx, p, p - 1 if kx is None else kx, "both_ends_zero")
    st = build_space(1.0, Nt, p, p - 1 if kt is None else kt, "left_zero")
    sol = solve_spacetime(SpaceTimeProblem(sx, st, exact.source))
    return {n: spacetime_error(sol, exact, n) for n in ST_NORMS}


def stability_sweep(p, ratios, ht=ST_H0):
    Nt = int(round(1.0 / ht))
    rows = [spacetime_run(p, Nt * r, Nt) for r in ratios]
    return {n: [r[n] for r in rows] for n in ST_NORMS}


def spacetime_sweep(p, kt, levels, h0=ST_H0):
    N0 = int(round(1.0 / h0))
    rows = [spacetime_run(p, N0 * 2**j, N0 * 2**j, kt) for j in range(levels)]
    return {n: [r[n] for r in rows] for n in ST_NORMS}
