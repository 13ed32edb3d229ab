"""Gauss-Legendre rules and exact quadrature against the weight exp(-t/T).

On a uniform mesh every element integral of a polynomial times exp(-t/T)
reduces to the reference element [0, h]:

    int_{t_j}^{t_j + h} q(t) exp(-t/T) dt = exp(-t_j/T) int_0^h q(s + t_j) exp(-s/T) ds,

so a single Gaussian rule for the weight exp(-s/T) on [0, h] serves the
whole mesh (see `WeightedQuadRule.integrate`).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import QuadratureConstructionError, ValidationError

_MAX_GL = 64
_EXACTNESS_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Rule on the unit interval [0, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def exact_degree(self):
        return 2 * self.nodes.size - 1

    def scaled(self, a, b):
        """Nodes and weights mapped to [a, b]."""
        return a + (b - a) * self.nodes, (b - a) * self.weights


@lru_cache(maxsize=None)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(n):
    """n-point Gauss-Legendre rule on [0, 1], exact for degree 2n - 1."""
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= _MAX_GL):
        raise ValidationError(f"Gauss-Legendre point count must be in [1, {_MAX_GL}], got {n!r}")
    return QuadRule(*_leggauss(int(n)))


def composite_gauss(breaks, n):
    """Composite n-point Gauss-Legendre nodes/weights on consecutive intervals of `breaks`."""
    rule = gauss_legendre(n)
    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1, None], breaks[1:, None]
    x = a + (b - a) * rule.nodes[None, :]
    w = (b - a) * rule.weights[None, :]
    return x.ravel(), w.ravel()


def exp_moments(h, T, k_max):
    """Moments mu_k = int_0^h t^k exp(-t/T) dt for k = 0..k_max.

    With c = h/T the scaled moments m_k = mu_k / h^(k+1) = int_0^1 x^k e^{-cx} dx
    satisfy m_k = (k m_{k-1} - e^{-c}) / c. Run upward this loses a factor k/c per
    step, so for c <= 1 the recurrence is run downward from a series value at
    k_max; for c > 1 the upward sweep is used while k < c and the regularised
    incomplete gamma function beyond.
    """
    if not h > 0 or not T > 0:
        raise ValidationError(f"exp_moments needs h > 0 and T > 0, got h={h!r}, T={T!r}")
    if not (isinstance(k_max, (int, np.integer)) and k_max >= 0):
        raise ValidationError(f"k_max must be a non-negative integer, got {k_max!r}")
    c = h / T
    K = int(k_max)
    em = math.exp(-c)
    m = np.empty(K + 1)
    if c <= 1.0:
        # series: m_K = sum_j (-c)^j / (j! (K + j + 1)); terms decay at least like 1/j!
        terms = []
        term = 1.0
        j = 0
        while True:
            t = term / (K + j + 1)
            terms.append(t)
            if abs(t) < 1e-18 * abs(terms[0]) or j > 200:
                break
            j += 1
            term *= -c / j
        m[K] = math.fsum(terms)
        for k in range(K, 0, -1):
            m[k - 1] = (c * m[k] + em) / k
    else:
        m[0] = -math.expm1(-c) / c
        for k in range(1, K + 1):
            if k < c:
                m[k] = (k * m[k - 1] - em) / c
            else:
                a = k + 1
                m[k] = math.exp(special.gammaln(a) - a * math.log(c)) * special.gammainc(a, c)
    return m * h ** np.arange(1, K + 2)


@dataclass(frozen=True, eq=False)
class WeightedQuadRule:
    """Gaussian rule for int_0^h q(t) exp(-t/T) dt."""

    nodes: np.ndarray
    weights: np.ndarray
    h: float
    T: float
    exact_degree: int

    def on_element(self, t_j):
        """Nodes and weights for int_{t_j}^{t_j+h} q(t) exp(-t/T) dt."""
        return t_j + self.nodes, math.exp(-t_j / self.T) * self.weights

    def integrate(self, q, t_j=0.0):
        x, w = self.on_element(t_j)
        return float(np.dot(w, q(x)))


@lru_cache(maxsize=256)
def _weighted_rule_cached(h, T, exact_degree):
    from .orthopoly import jacobi_matrix

    n = (exact_degree + 2) // 2
    J = jacobi_matrix(h, T, n)
    nodes, vecs = np.linalg.eigh(J)
    mu = exp_moments(h, T, max(exact_degree, 0))
    weights = mu[0] * vecs[0] ** 2
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]

    got = np.array([np.dot(weights, nodes ** k) for k in range(exact_degree + 1)])
    rel = np.max(np.abs(got - mu) / np.abs(mu))
    if not rel <= _EXACTNESS_RTOL:
        raise QuadratureConstructionError(
            f"weighted rule (h={h}, T={T}, degree {exact_degree}) misses moments by {rel:.2e}")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return WeightedQuadRule(nodes, weights, h, T, exact_degree)


def weighted_element_rule(h, T, exact_degree):
    """Gauss rule for the weight exp(-t/T) on [0, h] exact up to `exact_degree`.

    Uses ceil((exact_degree + 1) / 2) points from the Jacobi matrix of the
    weighted orthogonal polynomials (Golub-Welsch).
    """
    if not h > 0 or not T > 0:
        raise ValidationError(f"weighted rule needs h > 0 and T > 0, got h={h!r}, T={T!r}")
    if not (isinstance(exact_degree, (int, np.integer)) and exact_degree >= 0):
        raise ValidationError(f"exact_degree must be a non-negative integer, got {exact_degree!r}")
    return _weighted_rule_cached(float(h), float(T), int(exact_degree))
