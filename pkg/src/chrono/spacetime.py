"""Tensor-product space-time Galerkin solver for the 1D wave equation on (0, 1) x (0, T).

With U_h(x, t) = sum_ij C[i, j] phi_i(x) psi_j(t) the discrete problem is

    M_x C A_t^T + K_x C M_w^T = R,

A_t = K_w + e0 (the weighted temporal operator at mu = 0), M_w the weighted
temporal mass-derivative matrix, and R[k, l] = int int F phi_k e^{-t/T} psi_l'.
It is solved by diagonalising the spatial pencil, K_x V = M_x V Lambda with
V^T M_x V = I, which leaves one temporal problem (A_t + lambda_k M_w) per mode.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .errors import ValidationError
from .linalg import gen_sym_eig, lu_solve
from .ode import _weighted_parts, assemble_form, check_conforming, element_weights
from .quadrature import gauss_legendre


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float))


def check_spatial(space):
    if space.constraint != "both_ends_zero":
        raise ValidationError(f"spatial space needs both_ends_zero, got {space.constraint!r}")


def assemble_spatial(space_x, c=_one, c_min=1e-12, n_points=None):
    """Mass matrix and c^2-weighted stiffness matrix of a spatial spline space."""
    check_spatial(space_x)
    rule = gauss_legendre(n_points or space_x.degree + 3)
    local = space_x.h * rule.nodes
    w = element_weights(space_x, space_x.h * rule.weights)
    x = space_x.breakpoints[:-1, None] + local[None, :]
    cx = np.asarray(c(x), dtype=float)
    if np.any(cx < c_min):
        raise ValidationError(f"wave speed must be >= {c_min}, got min {cx.min():.3e}")
    M = assemble_form(space_x, local, w, 0, 0)
    K = assemble_form(space_x, local, w * cx**2, 1, 1)
    return 0.5 * (M + M.T), 0.5 * (K + K.T)


@dataclass(frozen=True)
class SpaceTimeExact:
    """Exact solution with the derivatives needed by the error norms."""

    u: Callable
    dt: Callable
    dtt: Callable
    dx: Callable
    dxt: Callable
    div_flux: Callable  # d/dx (c^2 du/dx)
    source: Callable


def wave_case(alpha=1.25):
    """U = sin(pi x) sin^2(alpha pi t) with c = 1."""
    pi = math.pi
    a = alpha * pi

    def u(x, t):
        return np.sin(pi * x) * np.sin(a * t) ** 2

    def dt(x, t):
        return np.sin(pi * x) * a * np.sin(2 * a * t)

    def dtt(x, t):
        return np.sin(pi * x) * 2 * a * a * np.cos(2 * a * t)

    def dx(x, t):
        return pi * np.cos(pi * x) * np.sin(a * t) ** 2

    def dxt(x, t):
        return pi * np.cos(pi * x) * a * np.sin(2 * a * t)

    def div_flux(x, t):
        return -pi * pi * u(x, t)

    def source(x, t):
        return np.sin(pi * x) * (2 * a * a * np.cos(2 * a * t) + pi * pi * np.sin(a * t) ** 2)

    return SpaceTimeExact(u, dt, dtt, dx, dxt, div_flux, source)


def zero_case():
    z = lambda x, t: np.zeros(np.broadcast(np.asarray(x), np.asarray(t)).shape)
    return SpaceTimeExact(z, z, z, z, z, z, z)


@dataclass(frozen=True, eq=False)
class SpaceTimeProblem:
    space_x: object
    space_t: object
    F: Callable
    c: Callable = _one
    dc: Optional[Callable] = None
    T: Optional[float] = None
    quad_points: Optional[int] = None

    def __post_init__(self):
        check_spatial(self.space_x)
        check_conforming(self.space_t)
        if self.T is None:
            object.__setattr__(self, "T", self.space_t.interval_length)


@dataclass(frozen=True, eq=False)
class SpaceTimeSolution:
    space_x: object
    space_t: object
    coefficients: np.ndarray  # (n_x, n_t)
    eigenvalues: Optional[np.ndarray] = field(default=None, repr=False)


def _basis_sparse(space, local_nodes, d):
    """Sparse (N*nq, dim) matrix of d-th derivatives at t_e + local_nodes."""
    first, tab = space.element_tables(local_nodes, d)
    N, nq, p = space.n_elements, len(local_nodes), space.degree
    rows = np.repeat(np.arange(N * nq), p + 1)
    cols = (first[:, None, None] + np.arange(p + 1)[None, None, :]).repeat(nq, axis=1).ravel()
    vals = tab[:, d].ravel()
    B = sp.csr_matrix((vals, (rows, cols)), shape=(N * nq, space.full_dim))
    return B[:, space.kept]


def _grid(space, rule):
    local = space.h * rule.nodes
    pts = (space.breakpoints[:-1, None] + local[None, :]).ravel()
    wts = np.tile(space.h * rule.weights, space.n_elements)
    return local, pts, wts


def load_matrix(prob, n_points=None):
    """R[k, l] = int int F phi_k e^{-t/T} psi_l' by tensor Gauss-Legendre."""
    sx, st = prob.space_x, prob.space_t
    nx = n_points or prob.quad_points or sx.degree + 6
    nt = n_points or prob.quad_points or st.degree + 6
    lx, x, wx = _grid(sx, gauss_legendre(nx))
    lt, t, wt = _grid(st, gauss_legendre(nt))
    Bx = _basis_sparse(sx, lx, 0)
    Bt = _basis_sparse(st, lt, 1)
    Fq = np.asarray(prob.F(x[:, None], t[None, :]), dtype=float)
    Fq = Fq * wx[:, None] * (wt * np.exp(-t / prob.T))[None, :]
    return np.asarray((Bt.T @ (Bx.T @ Fq).T).T)


def temporal_matrices(space_t, T):
    K_w, e0, M_w = _weighted_parts(space_t, T)
    return K_w + e0, M_w


def solve_spacetime(prob):
    """Fast-diagonalisation solve."""
    M_x, K_x = assemble_spatial(prob.space_x, prob.c)
    A_t, M_w = temporal_matrices(prob.space_t, prob.T)
    R = load_matrix(prob)
    lam, V = gen_sym_eig(K_x, M_x)
    if np.any(lam <= 0):
        raise ValidationError("spatial stiffness is not positive definite")
    RT = V.T @ R
    D = np.empty_like(RT)
    for k in range(lam.size):
        D[k] = lu_solve(A_t + lam[k] * M_w, RT[k])
    return SpaceTimeSolution(prob.space_x, prob.space_t, V @ D, lam)


def solve_spacetime_dense(prob):
    """Oracle: assemble M_x (x) A_t + K_x (x) M_w explicitly and solve."""
    M_x, K_x = assemble_spatial(prob.space_x, prob.c)
    A_t, M_w = temporal_matrices(prob.space_t, prob.T)
    R = load_matrix(prob)
    # row-major vec(C): index i * n_t + j
    big = np.kron(M_x, A_t) + np.kron(K_x, M_w)
    c = lu_solve(big, R.ravel())
    return SpaceTimeSolution(prob.space_x, prob.space_t, c.reshape(R.shape))


NORMS = ("L2", "H1", "H2semi")


def _parts(sol, exact, norm, c, dc, n_points):
    sx, st = sol.space_x, sol.space_t
    lx, x, wx = _grid(sx, gauss_legendre(n_points or sx.degree + 6))
    lt, t, wt = _grid(st, gauss_legendre(n_points or st.degree + 6))
    X, Tt = x[:, None], t[None, :]
    W = wx[:, None] * wt[None, :]
    C = sol.coefficients
    cx = np.asarray(c(x), dtype=float)[:, None]

    def uh(dx_, dt_):
        return np.asarray(_basis_sparse(sx, lx, dx_) @ (_basis_sparse(st, lt, dt_) @ C.T).T)

    def l2(a):
        return math.sqrt(float(np.sum(W * a * a)))

    if norm == "L2":
        pairs = [(exact.u(X, Tt), uh(0, 0))]
    elif norm == "H1":
        pairs = [(exact.dt(X, Tt), uh(0, 1)), (cx * exact.dx(X, Tt), cx * uh(1, 0))]
    else:
        div_h = cx**2 * uh(2, 0)
        if dc is not None:
            div_h = div_h + 2 * cx * np.asarray(dc(x), dtype=float)[:, None] * uh(1, 0)
        pairs = [(exact.dtt(X, Tt), uh(0, 2)), (exact.div_flux(X, Tt), div_h),
                 (cx * exact.dxt(X, Tt), cx * uh(1, 1))]
    err = sum(l2(a - b) for a, b in pairs)
    ref = sum(l2(a) for a, _ in pairs)
    return err, ref


def spacetime_error(sol, exact, norm, relative=True, c=_one, dc=None, n_points=None):
    """Error in the L2 norm, the H1 norm ||d_t e|| + ||c d_x e||, or the H2 seminorm
    ||d_t^2 e|| + ||d_x(c^2 d_x e)|| + ||c d_x d_t e||."""
    if norm not in NORMS:
        raise ValidationError(f"norm must be one of {NORMS}, got {norm!r}")
    if norm == "H2semi" and (sol.space_x.regularity < 1 or sol.space_t.regularity < 1):
        raise ValidationError("H2 seminorm needs C^1 splines in space and time")
    err, ref = _parts(sol, exact, norm, c, dc, n_points)
    if not relative:
        return err
    return err / ref if ref > 0 else err


def energy_norm(sol, n_points=None):
    """||d_t U_h|| + ||d_x U_h|| (c = 1) for the stability bound."""
    err, _ = _parts(sol, zero_case(), "H1", _one, None, n_points)
    return err


def source_norm(F, T, n=64, elements=16):
    x, wx = _composite(1.0, n, elements)
    t, wt = _composite(T, n, elements)
    vals = np.asarray(F(x[:, None], t[None, :]), dtype=float)
    return math.sqrt(float(np.sum(wx[:, None] * wt[None, :] * vals**2)))


def _composite(L, n, elements):
    from .quadrature import composite_gauss
    return composite_gauss(np.linspace(0.0, L, elements + 1), n)
