"""Projection operators onto discontinuous-derivative and spline spaces.

* ``project_ph``: the non-local projection onto continuous piecewise
  polynomials of degree p. On each element it is the weighted L2 projection
  onto degree p-1 plus a multiple of the orthogonal polynomial P_p, the
  multiple being fixed by continuity with the previous element.
* ``project_qh``: the projection Q_h onto a left-zero spline space defined by
  weighted orthogonality of first derivatives against second derivatives of
  the space, together with matching of the first derivative at t = T.
* ``project_pi_dt2``: Galerkin projection for the mu = 0 bilinear form.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateNormalizationError, RankDeficiencyError, ValidationError
from .linalg import lu_solve
from .ode import (DiscreteSolution, assemble_form, check_conforming, element_weights,
                  load_vector)
from .orthopoly import build_orthopolys
from .quadrature import exp_moments, gauss_legendre, weighted_element_rule

_ALPHA_GUARD = 1e-8
_RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    """Piecewise polynomial on a uniform mesh; ``coeffs[e, k]`` multiplies (t - t_e)^k."""

    T: float
    coeffs: np.ndarray

    @property
    def n_elements(self):
        return self.coeffs.shape[0]

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    @property
    def h(self):
        return self.T / self.n_elements

    @property
    def breakpoints(self):
        return np.linspace(0.0, self.T, self.n_elements + 1)

    def _element_of(self, t):
        s = t / self.h
        r = np.rint(s)
        s = np.where(np.abs(s - r) <= 1e-12 * self.n_elements, r, s)
        return np.clip(np.floor(s).astype(int), 0, self.n_elements - 1)

    def __call__(self, t, d=0, side="right"):
        """Value (or d-th derivative); at breakpoints the right limit unless side='left'."""
        t = np.asarray(t, dtype=float)
        e = self._element_of(t)
        if side == "left":
            on_node = np.isclose(t, e * self.h, rtol=0, atol=1e-12 * self.T) & (e > 0)
            e = np.where(on_node, e - 1, e)
        c = self.coeffs if d == 0 else npoly.polyder(self.coeffs, d, axis=1)
        s = t - e * self.h
        out = np.zeros_like(s)
        for k in range(c.shape[1] - 1, -1, -1):
            out = out * s + c[e, k]
        return out

    def left_values(self):
        return self.coeffs[:, 0]

    def right_values(self):
        return npoly.polyval(self.h, self.coeffs.T)

    def jumps(self):
        return self.left_values()[1:] - self.right_values()[:-1]

    def derivative(self):
        return PiecewisePolynomial(self.T, npoly.polyder(self.coeffs, 1, axis=1))

    def antiderivative(self, value_at_zero=0.0):
        """Continuous antiderivative F with F(0) = value_at_zero."""
        c = npoly.polyint(self.coeffs, 1, axis=1)
        inc = npoly.polyval(self.h, c.T)
        c[:, 0] = value_at_zero + np.concatenate([[0.0], np.cumsum(inc)[:-1]])
        return PiecewisePolynomial(self.T, c)


def _local_weighted_rule(h, T, p):
    # p + 6 points, matching the source quadrature used elsewhere
    return weighted_element_rule(h, T, 2 * p + 11)


def project_ph(v, p, N, T, v0=None, anchor="left"):
    """Continuous piecewise polynomial of degree p: the non-local weighted projection of v.

    With ``anchor='left'`` the value v(0) (or ``v0``) is matched and the
    continuity constants are swept left to right. ``anchor='right'`` matches
    v(T) instead and sweeps right to left.
    """
    if anchor not in ("left", "right"):
        raise ValidationError(f"anchor must be 'left' or 'right', got {anchor!r}")
    if not (isinstance(p, (int, np.integer)) and p >= 1):
        raise ValidationError(f"degree must be an integer >= 1, got {p!r}")
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise ValidationError(f"element count must be a positive integer, got {N!r}")
    T = float(T)
    h = T / N
    basis = build_orthopolys(h, T, p)
    rule = _local_weighted_rule(h, T, p)
    P_nodes = basis.values(rule.nodes)  # (p+1, nq)
    left = basis.left_values()
    if abs(left[p]) < _ALPHA_GUARD:
        raise DegenerateNormalizationError(f"|P_{p}(0)| = {abs(left[p]):.2e} too small")
    # c[e, r] weights of P_r on element e
    t = np.arange(N)[:, None] * h + rule.nodes[None, :]
    vals = np.asarray(v(t), dtype=float)
    proj = (vals * rule.weights) @ P_nodes[:p].T / basis.norms2[:p]
    c = np.zeros((N, p + 1))
    c[:, :p] = proj
    if anchor == "left":
        prev = float(v(np.array([0.0]))[0]) if v0 is None else float(v0)
        for e in range(N):
            c[e, p] = (prev - c[e, :p] @ left[:p]) / left[p]
            prev = c[e].sum()  # P_r(h) = 1
    else:
        nxt = float(v(np.array([T]))[0]) if v0 is None else float(v0)
        for e in range(N - 1, -1, -1):
            c[e, p] = nxt - c[e, :p].sum()
            nxt = c[e] @ left
    mono = np.zeros((p + 1, p + 1))
    for r, cr in enumerate(basis.coeffs):
        mono[r, :cr.size] = cr
    return PiecewisePolynomial(T, c @ mono)


def project_ph_local_system(v, p, N, T, v0=None, n_points=30):
    """Oracle for ``project_ph``: per element solve the (p+1)x(p+1) moment system.

    Unknown monomial coefficients q_k of q(s) = sum q_k s^k, s in [0, h]:
    q(0) equals the previous right value, and
    int q s^j e^{-s/T} = int v s^j e^{-s/T} for j < p.
    """
    T = float(T)
    h = T / N
    mu = exp_moments(h, T, 2 * p)
    rule = gauss_legendre(n_points)
    s = h * rule.nodes
    w = h * rule.weights * np.exp(-s / T)
    coeffs = np.zeros((N, p + 1))
    prev = float(v(np.array([0.0]))[0]) if v0 is None else float(v0)
    M = np.zeros((p + 1, p + 1))
    M[0, 0] = 1.0
    for j in range(p):
        M[j + 1] = mu[j:j + p + 1]
    for e in range(N):
        vals = np.asarray(v(e * h + s), dtype=float)
        rhs = np.empty(p + 1)
        rhs[0] = prev
        rhs[1:] = [np.dot(w, vals * s**j) for j in range(p)]
        # local moments carry the element factor exp(-t_e/T) on both sides, so it cancels
        coeffs[e] = np.linalg.solve(M, rhs)
        prev = npoly.polyval(h, coeffs[e])
    return PiecewisePolynomial(T, coeffs)


def nodal_error(v, pp):
    """max_i |v(t_i) - Pv(t_i)| over the nodes t_1..t_N."""
    nodes = pp.breakpoints[1:]
    return float(np.max(np.abs(np.asarray(v(nodes)) - pp.right_values())))


def l2_error(v, pp, n_points=None):
    rule = gauss_legendre(n_points or pp.degree + 6)
    t = pp.breakpoints[:-1, None] + pp.h * rule.nodes[None, :]
    w = pp.h * rule.weights
    diff = np.asarray(v(t)) - pp(t)
    return math.sqrt(float(np.sum(w * diff**2)))


def spline_from_piecewise(pp, space):
    """Coefficients of a piecewise polynomial that lies in `space`, by L2 projection."""
    n = space.degree + 1
    rule = gauss_legendre(n)
    local = space.h * rule.nodes
    w = element_weights(space, space.h * rule.weights)
    M = assemble_form(space, local, w, 0, 0)
    b = load_vector(space, pp, n, 0)
    return sla.solve(M, b, assume_a="pos")


@dataclass(frozen=True)
class QhDiagnostics:
    rank: int
    size: int
    sigma_ratio: float
    residual: float


def _qh_k1(u, space):
    p, N, T = space.degree, space.n_elements, space.interval_length
    d1 = lambda t: u(t, 1)
    # anchoring at T enforces d/dt Q_h u(T) = u'(T)
    pp = project_ph(d1, p - 1, N, T, anchor="right").antiderivative(0.0)
    return DiscreteSolution(space, spline_from_piecewise(pp, space))


def qh_system(u, space):
    """Square system for Q_h: orthogonality rows (all test functions but the last)
    and the row matching the first derivative at T."""
    T = space.interval_length
    p = space.degree
    rule = weighted_element_rule(space.h, T, 2 * p + 11)
    w = element_weights(space, rule.weights, T)
    # G[i, j] = int phi_j' e^{-t/T} phi_i''
    G = assemble_form(space, rule.nodes, w, 1, 2)
    first, tab = space.element_tables(rule.nodes, 2)
    b = np.zeros(space.full_dim)
    for e in range(space.n_elements):
        t = e * space.h + rule.nodes
        b[first[e]:first[e] + p + 1] += tab[e, 2].T @ (w[e] * u(t, 1))
    b = b[space.kept]
    # t itself lies in the space with d^2 t = 0: drop the last test row
    A = np.vstack([G[:-1], space.basis_matrix([T], 1)])
    rhs = np.concatenate([b[:-1], [float(u(np.array([T]), 1)[0])]])
    return A, rhs


def _qh_general(u, space):
    A, rhs = qh_system(u, space)
    n = A.shape[0]
    Q, R, piv = sla.qr(A, pivoting=True)
    d = np.abs(np.diag(R))
    ratio = float(d[-1] / d[0]) if d[0] > 0 else 0.0
    rank = int(np.sum(d > _RANK_RTOL * d[0]))
    if rank < n:
        raise RankDeficiencyError(
            f"Q_h system is rank deficient: rank {rank} of {n}, sigma ratio {ratio:.2e}",
            rank=rank, size=n, sigma_ratio=ratio)
    y = sla.solve_triangular(R, Q.T @ rhs)
    x = np.empty(n)
    x[piv] = y
    res = float(np.linalg.norm(A @ x - rhs, np.inf) / max(np.linalg.norm(rhs, np.inf), 1e-300))
    return DiscreteSolution(space, x), QhDiagnostics(rank, n, ratio, res)


def project_qh(u, space, route="auto", return_diagnostics=False):
    """Q_h u in a left-zero spline space. ``route`` is 'auto', 'k1' or 'system'."""
    check_conforming(space)
    if route not in ("auto", "k1", "system"):
        raise ValidationError(f"route must be 'auto', 'k1' or 'system', got {route!r}")
    if route == "auto":
        route = "k1" if space.regularity == 1 else "system"
    if route == "k1":
        if space.regularity != 1:
            raise ValidationError("the antiderivative route needs C^1 splines")
        sol = _qh_k1(u, space)
        diag = None
    else:
        sol, diag = _qh_general(u, space)
    return (sol, diag) if return_diagnostics else sol


def project_pi_dt2(u, space, T=None):
    """Solve (K_w + e0) x = rhs with rhs_i = (u'', e^{-t/T} phi_i') + u'(0) phi_i'(0)."""
    check_conforming(space)
    T = space.interval_length if T is None else float(T)
    p = space.degree
    rule = weighted_element_rule(space.h, T, 2 * p + 1)
    w = element_weights(space, rule.weights, T)
    K = assemble_form(space, rule.nodes, w, 2, 1)
    d0 = space.basis_matrix([0.0], 1)[0]
    A = K + np.outer(d0, d0)
    b = load_vector(space, lambda t: u(t, 2), p + 6, 1, T)
    b = b + float(u(np.array([0.0]), 1)[0]) * d0
    return DiscreteSolution(space, lu_solve(A, b))
