"""Weighted Galerkin discretisation of u'' + mu u = f on (0, T), u(0) = u'(0) = 0.

Trial and test space are the same spline space with the left-zero
constraint. The discrete problem reads

    (u_h'', e^{-t/T} w') + u_h'(0) w'(0) + mu (u_h, e^{-t/T} w') = (f, e^{-t/T} w')

for all test splines w.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cases import ExactSolution
from .errors import ValidationError
from .linalg import lu_solve
from .quadrature import gauss_legendre, weighted_element_rule


def check_conforming(space):
    if space.regularity < 1:
        raise ValidationError(f"need C^1 splines (regularity >= 1), got k={space.regularity}")
    if space.constraint != "left_zero":
        raise ValidationError(f"need a left_zero space, got constraint {space.constraint!r}")


def element_weights(space, local_weights, T=None):
    """Per-element weights of shape (N, nq); with T given, include exp(-t_e/T)."""
    N = space.n_elements
    w = np.tile(np.asarray(local_weights, dtype=float), (N, 1))
    if T is not None:
        w *= np.exp(-space.breakpoints[:-1] / T)[:, None]
    return w


def assemble_form(space, local_nodes, weights, d_trial, d_test):
    """M[i, j] = sum_q weights * (d^d_trial phi_j)(d^d_test phi_i) over all elements.

    `local_nodes` are offsets in [0, h]; `weights` has shape (N, nq). Returns the
    matrix in the constrained numbering.
    """
    first, tab = space.element_tables(local_nodes, max(d_trial, d_test))
    n = space.full_dim
    p = space.degree
    M = np.zeros((n, n))
    for e in range(space.n_elements):
        trial = tab[e, d_trial]  # (nq, p+1)
        test = tab[e, d_test]
        loc = (test * weights[e][:, None]).T @ trial
        sl = slice(first[e], first[e] + p + 1)
        M[sl, sl] += loc
    kept = space.kept
    return M[kept, kept]


def load_vector(space, f, n_points, d_test, T=None):
    """b[i] = int f (d^d_test phi_i) [exp(-t/T)] dt with per-element Gauss-Legendre."""
    rule = gauss_legendre(n_points)
    local = space.h * rule.nodes
    first, tab = space.element_tables(local, d_test)
    p = space.degree
    b = np.zeros(space.full_dim)
    for e in range(space.n_elements):
        t = e * space.h + local
        w = space.h * rule.weights * np.asarray(f(t), dtype=float)
        if T is not None:
            w = w * np.exp(-t / T)
        b[first[e]:first[e] + p + 1] += tab[e, d_test].T @ w
    return b[space.kept]


@dataclass(frozen=True, eq=False)
class OdeSystem:
    space: object
    mu: float
    T: float
    K_w: np.ndarray
    e0: np.ndarray
    M_w: np.ndarray

    @property
    def matrix(self):
        return self.K_w + self.e0 + self.mu * self.M_w

    def with_mu(self, mu):
        return OdeSystem(self.space, float(mu), self.T, self.K_w, self.e0, self.M_w)


def _weighted_parts(space, T):
    p = space.degree
    rule = weighted_element_rule(space.h, T, 2 * p + 1)
    w = element_weights(space, rule.weights, T)
    K_w = assemble_form(space, rule.nodes, w, 2, 1)
    M_w = assemble_form(space, rule.nodes, w, 0, 1)
    d0 = space.basis_matrix([0.0], 1)[0]
    return K_w, np.outer(d0, d0), M_w


def assemble_ode(space, mu, T=None):
    """System matrix A = K_w + e0 + mu M_w with A[i, j] = a(phi_j, L_T phi_i)."""
    check_conforming(space)
    T = space.interval_length if T is None else float(T)
    if not mu >= 0:
        raise ValidationError(f"mu must be non-negative, got {mu!r}")
    K_w, e0, M_w = _weighted_parts(space, T)
    return OdeSystem(space, float(mu), T, K_w, e0, M_w)


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    space: object
    coefficients: np.ndarray

    def __post_init__(self):
        if self.coefficients.shape != (self.space.dim,):
            raise ValidationError(
                f"{self.coefficients.shape[0]} coefficients for a space of dimension {self.space.dim}")

    def __call__(self, t, d=0):
        return self.space.basis_matrix(t, d) @ self.coefficients

    def element_values(self, local_nodes, d):
        """d-th derivative at ``t_e + local_nodes`` for every element, shape (N, nq)."""
        first, tab = self.space.element_tables(local_nodes, d)
        c = np.zeros(self.space.full_dim)
        c[self.space.kept] = self.coefficients
        p = self.space.degree
        idx = first[:, None] + np.arange(p + 1)[None, :]
        return np.einsum("eqj,ej->eq", tab[:, d], c[idx])


def rhs_points(space):
    return space.degree + 6


def solve_ode(space, mu, T=None, f=None, system=None):
    """Galerkin solution for source f (callable or ExactSolution)."""
    if system is None:
        system = assemble_ode(space, mu, T)
    T = system.T
    if isinstance(f, ExactSolution):
        f = f.source(system.mu)
    if not callable(f):
        raise ValidationError("source must be callable or an ExactSolution")
    b = load_vector(space, f, rhs_points(space), 1, T)
    return DiscreteSolution(space, lu_solve(system.matrix, b))


def ode_error(sol, exact, order, relative=True, n_points=None):
    """||d^order (u - u_h)||_{L2(0,T)}, optionally divided by ||d^order u||."""
    if order not in (0, 1, 2):
        raise ValidationError(f"order must be 0, 1 or 2, got {order!r}")
    space = sol.space
    if order > space.regularity + 1:
        raise ValidationError(f"order {order} not defined for C^{space.regularity} splines")
    rule = gauss_legendre(n_points or rhs_points(space))
    local = space.h * rule.nodes
    uh = sol.element_values(local, order)
    t = space.breakpoints[:-1, None] + local[None, :]
    u = exact(t, order)
    w = space.h * rule.weights
    err = math.sqrt(float(np.sum(w * (u - uh) ** 2)))
    if not relative:
        return err
    return err / math.sqrt(float(np.sum(w * u ** 2)))


def figure_errors(sol, exact, T=None, n_points=None):
    """Relative errors reported in convergence plots.

    L2 and H1 are ``ode_error`` of order 0 and 1. H2 combines the second and
    first derivatives as (||e''|| + T ||e'||) / (||u''|| + T ||u'||); this
    weighting reproduces the published reference data, whereas the 1/T
    weighting of the H^2_{0,*} norm does not.
    """
    T = sol.space.interval_length if T is None else T
    e = [ode_error(sol, exact, d, relative=False, n_points=n_points) for d in (0, 1, 2)]
    zero = DiscreteSolution(sol.space, np.zeros_like(sol.coefficients))
    r = [ode_error(zero, exact, d, relative=False, n_points=n_points) for d in (0, 1, 2)]
    return {
        "L2": e[0] / r[0],
        "H1": e[1] / r[1],
        "H2": (e[2] + T * e[1]) / (r[2] + T * r[1]),
    }
