"""Manufactured solutions for the model ODE u'' + mu u = f, u(0) = u'(0) = 0."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ValidationError

_IC_TOL = 1e-13


@dataclass(frozen=True)
class ExactSolution:
    """Analytic solution given by its derivative function ``deriv(n, t)``."""

    name: str
    deriv: Callable

    def __post_init__(self):
        u0 = float(self.deriv(0, np.array([0.0]))[0])
        u1 = float(self.deriv(1, np.array([0.0]))[0])
        if abs(u0) > _IC_TOL or abs(u1) > _IC_TOL:
            raise ValidationError(
                f"case {self.name!r} violates u(0) = u'(0) = 0 (got {u0:.3e}, {u1:.3e})")

    def __call__(self, t, n=0):
        return self.deriv(n, np.asarray(t, dtype=float))

    def value(self, t):
        return self(t, 0)

    def d1(self, t):
        return self(t, 1)

    def d2(self, t):
        return self(t, 2)

    def d3(self, t):
        return self(t, 3)

    def source(self, mu):
        """f = u'' + mu u."""
        return lambda t: self(t, 2) + mu * self(t, 0)


def _t2exp(n, t):
    # (t^2 e^{-t})^{(n)} = (-1)^n e^{-t} (t^2 - 2 n t + n (n - 1))
    return (-1) ** n * np.exp(-t) * (t * t - 2 * n * t + n * (n - 1))


def _sin2(n, t):
    if n == 0:
        return np.sin(t) ** 2
    return -(2.0 ** (n - 1)) * np.cos(2 * t + n * math.pi / 2)


def _sin2t(n, t):
    # Leibniz on sin^2(t) * (t^2 e^{-t})
    return sum(math.comb(n, j) * _sin2(j, t) * _t2exp(n - j, t) for j in range(n + 1))


def polynomial_case(coeffs, name="poly"):
    """u(t) = sum_k coeffs[k] t^k; coeffs[0] and coeffs[1] must vanish."""
    c = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))

    def deriv(n, t):
        return c.deriv(n)(t) if n else c(t)

    return ExactSolution(name, deriv)


def _zero(n, t):
    return np.zeros_like(t)


CASES = {
    "t2exp": ExactSolution("t2exp", _t2exp),
    "sin2t": ExactSolution("sin2t", _sin2t),
    "half_t2": polynomial_case([0.0, 0.0, 0.5], "half_t2"),
    "zero": ExactSolution("zero", _zero),
}


def get_case(name):
    try:
        return CASES[name]
    except KeyError:
        raise ValidationError(f"unknown case {name!r}; choose from {sorted(CASES)}") from None
