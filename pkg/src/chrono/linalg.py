"""Dense linear algebra on top of LAPACK (via scipy), with input checks and
error types of this package."""

import warnings

import numpy as np
import scipy.linalg as sla

from .errors import (EigenConvergenceError, NotPositiveDefiniteError,
                     SingularMatrixError, ValidationError)

SYM_TOL = 1e-12


def _as_matrix(A, name="A", square=True):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} has non-finite entries")
    return A


def check_symmetric(A, name="A"):
    A = _as_matrix(A, name)
    scale = np.max(np.abs(A)) if A.size else 0.0
    if np.max(np.abs(A - A.T), initial=0.0) > SYM_TOL * scale:
        raise ValidationError(f"{name} is not symmetric")
    return A


def lu_solve(A, b):
    """Solve A x = b by LU with partial pivoting."""
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise ValidationError(f"right-hand side of length {b.shape[0]} for a {A.shape} matrix")
    if not np.all(np.isfinite(b)):
        raise ValidationError("right-hand side has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError("zero pivot in LU factorization")
    return sla.lu_solve((lu, piv), b, check_finite=False)


def cholesky(G):
    """Lower-triangular L with L L^T = G."""
    G = check_symmetric(G, "G")
    try:
        return sla.cholesky(G, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"matrix is not positive definite ({exc})") from None


def _fix_signs(V):
    # first component above roundoff made positive, column by column
    if V.size == 0:
        return V
    mags = np.abs(V)
    lead = np.argmax(mags > 1e-14 * mags.max(axis=0, keepdims=True), axis=0)
    s = np.sign(V[lead, np.arange(V.shape[1])])
    s[s == 0] = 1.0
    return V * s


def sym_eig(A):
    """Eigenvalues (ascending) and orthonormal eigenvectors of symmetric A."""
    A = check_symmetric(A)
    try:
        lam, V = sla.eigh(A, check_finite=False)
    except sla.LinAlgError as exc:
        raise EigenConvergenceError(str(exc)) from None
    return lam, _fix_signs(V)


def gen_sym_eig(B, G, subset=None):
    """Solve B v = lam G v for symmetric B and SPD G.

    Reduces to the standard problem C = L^{-1} B L^{-T} with G = L L^T, and
    returns ascending eigenvalues with G-orthonormal eigenvectors. `subset`
    is an inclusive index pair (lo, hi) restricting the computed eigenpairs.
    """
    B = check_symmetric(B, "B")
    G = _as_matrix(G, "G")
    if B.shape != G.shape:
        raise ValidationError(f"shape mismatch {B.shape} vs {G.shape}")
    L = cholesky(G)
    X = sla.solve_triangular(L, B, lower=True, check_finite=False)
    C = sla.solve_triangular(L, X.T, lower=True, check_finite=False)
    C = 0.5 * (C + C.T)
    try:
        lam, W = sla.eigh(C, subset_by_index=subset, check_finite=False)
    except sla.LinAlgError as exc:
        raise EigenConvergenceError(str(exc)) from None
    V = sla.solve_triangular(L.T, W, lower=False, check_finite=False)
    return lam, _fix_signs(V)
