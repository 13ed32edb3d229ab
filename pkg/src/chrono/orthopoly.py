"""Polynomials orthogonal on [0, h] for the weight exp(-t/T), normalised by P_r(h) = 1.

The polynomials are generated by the three-term recurrence

    P_0 = 1,  P_{r+1}(t) = (A_r t + B_r) P_r(t) - C_r P_{r-1}(t),

    A_r = 1 / (h - I_r - J_r),  B_r = -A_r I_r,  C_r = A_r J_r,

    I_r = (t P_r, P_r)_w / (P_r, P_r)_w,  J_r = (t P_r, P_{r-1})_w / (P_{r-1}, P_{r-1})_w,

with J_0 = 0. The weighted inner products are evaluated on a 64-point
Gauss-Legendre discretisation of [0, h]; the integrands are polynomials of
degree <= 2 r_max + 1 times exp(-t/T), for which that rule is exact to
rounding whenever h <= T (the exponential's Taylor tail past degree 100 is
below 1e-100).

Because exp(-t/T) factorises under translation, the polynomials on the
element [t_{i-1}, t_i] are P_r(t - t_{i-1}); only the reference element is
stored.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import OrthogonalityLossError, ValidationError
from .quadrature import gauss_legendre

R_MAX = 12
_DISCRETE_POINTS = 64
_ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    h: float
    T: float
    r_max: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    I: np.ndarray
    J: np.ndarray
    norms2: np.ndarray
    coeffs: tuple  # coeffs[r][k] multiplies t**k, t in [0, h]

    def recurrence(self):
        return list(zip(self.A, self.B, self.C))

    def values(self, t, r_max=None):
        """All P_0..P_r at points t via the recurrence; shape (r_max + 1, len(t))."""
        r_max = self.r_max if r_max is None else r_max
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((r_max + 1, t.size))
        out[0] = 1.0
        if r_max >= 1:
            out[1] = (self.A[0] * t + self.B[0]) * out[0]
        for r in range(1, r_max):
            out[r + 1] = (self.A[r] * t + self.B[r]) * out[r] - self.C[r] * out[r - 1]
        return out

    def left_values(self):
        """P_r(0) for r = 0..r_max (equal to P_r^i(t_{i-1}) on every element)."""
        return self.values([0.0])[:, 0]


def _discrete_measure(h, T):
    rule = gauss_legendre(_DISCRETE_POINTS)
    t = h * rule.nodes
    w = h * rule.weights * np.exp(-t / T)
    return t, w


def _recurrence(h, T, r_max):
    t, w = _discrete_measure(h, T)
    A = np.zeros(r_max + 1)
    B = np.zeros(r_max + 1)
    C = np.zeros(r_max + 1)
    I = np.zeros(r_max + 1)
    J = np.zeros(r_max + 1)
    norms2 = np.zeros(r_max + 1)
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    norms2[0] = np.dot(w, cur * cur)
    for r in range(r_max + 1):
        I[r] = np.dot(w, t * cur * cur) / norms2[r]
        J[r] = 0.0 if r == 0 else np.dot(w, t * cur * prev) / norms2[r - 1]
        A[r] = 1.0 / (h - I[r] - J[r])
        B[r] = -A[r] * I[r]
        C[r] = A[r] * J[r]
        if r == r_max:
            break
        nxt = (A[r] * t + B[r]) * cur - C[r] * prev
        prev, cur = cur, nxt
        norms2[r + 1] = np.dot(w, cur * cur)
    return A, B, C, I, J, norms2


def build_orthopolys(h, T, r_max):
    """Orthogonal polynomials P_0..P_{r_max} on [0, h] for the weight exp(-t/T)."""
    if not h > 0 or not T > 0:
        raise ValidationError(f"orthopolys need h > 0 and T > 0, got h={h!r}, T={T!r}")
    if not (isinstance(r_max, (int, np.integer)) and 0 <= r_max <= R_MAX):
        raise ValidationError(f"r_max must be an integer in [0, {R_MAX}], got {r_max!r}")
    h, T, r_max = float(h), float(T), int(r_max)
    A, B, C, I, J, norms2 = _recurrence(h, T, r_max)

    coeffs = [np.array([1.0])]
    if r_max >= 1:
        coeffs.append(np.array([B[0], A[0]]))
    for r in range(1, r_max):
        nxt = np.zeros(r + 2)
        nxt[1:] += A[r] * coeffs[r]
        nxt[:-1] += B[r] * coeffs[r]
        nxt[:-2] -= C[r] * coeffs[r - 1]
        coeffs.append(nxt)

    basis = OrthoBasis(h, T, r_max, A[:r_max], B[:r_max], C[:r_max], I, J, norms2,
                       tuple(coeffs))
    _check_orthogonality(basis)
    return basis


def _check_orthogonality(basis):
    t, w = _discrete_measure(basis.h, basis.T)
    vals = np.array([npoly.polyval(t, c) for c in basis.coeffs])
    G = (vals * w) @ vals.T
    d = np.sqrt(np.diag(G))
    off = np.abs(G) / np.outer(d, d)
    np.fill_diagonal(off, 0.0)
    worst = off.max() if off.size else 0.0
    if worst > _ORTHO_TOL:
        raise OrthogonalityLossError(
            f"weighted orthogonality lost to {worst:.2e} for h={basis.h}, T={basis.T}, "
            f"r_max={basis.r_max}")


def eval_orthopoly(basis, r, t, d=0):
    """d-th derivative of P_r at t in [0, h] by Horner evaluation of stored coefficients."""
    if not 0 <= r <= basis.r_max:
        raise ValidationError(f"degree {r} outside 0..{basis.r_max}")
    if d < 0:
        raise ValidationError(f"derivative order must be non-negative, got {d}")
    t_arr = np.asarray(t, dtype=float)
    tol = 1e-12 * basis.h
    if np.any(t_arr < -tol) or np.any(t_arr > basis.h + tol):
        raise ValidationError(f"t outside [0, {basis.h}]")
    c = basis.coeffs[r]
    if d:
        c = npoly.polyder(c, d) if d <= r else np.array([0.0])
    out = npoly.polyval(t_arr, c)
    return float(out) if np.ndim(out) == 0 else out


def legendre_shifted(r, x):
    """Legendre polynomial on [0, 1] with L_r(1) = 1."""
    if not 0 <= r <= R_MAX:
        raise ValidationError(f"degree must be in [0, {R_MAX}], got {r}")
    x = np.asarray(x, dtype=float)
    s = 2.0 * x - 1.0
    prev, cur = np.ones_like(s), s
    if r == 0:
        out = prev
    else:
        for n in range(1, r):
            prev, cur = cur, ((2 * n + 1) * s * cur - n * prev) / (n + 1)
        out = cur
    return float(out) if out.ndim == 0 else out


def jacobi_matrix(h, T, n):
    """Symmetric tridiagonal Jacobi matrix of order n for the weight exp(-t/T) on [0, h].

    Built from the recurrence alone, so it is not limited by the monomial
    representation and n may exceed R_MAX + 1.
    """
    if not h > 0 or not T > 0:
        raise ValidationError(f"jacobi_matrix needs h > 0 and T > 0, got h={h!r}, T={T!r}")
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= _DISCRETE_POINTS // 2):
        raise ValidationError(f"order must be in [1, {_DISCRETE_POINTS // 2}], got {n!r}")
    A, _, _, I, J, _ = _recurrence(float(h), float(T), int(n) - 1)
    alpha = I[:n]
    # monic recurrence: beta_r = J_r / A_{r-1}
    beta = J[1:n] / A[:n - 1]
    return np.diag(alpha) + np.diag(np.sqrt(beta), 1) + np.diag(np.sqrt(beta), -1)
