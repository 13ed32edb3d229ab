"""Discrete coercivity constants of the weighted bilinear form.

The constant is the smallest value of x^T A x / x^T G x over the spline space,
i.e. the smallest generalized eigenvalue of (sym(A), G).
"""

from dataclasses import dataclass

from .errors import ValidationError
from .linalg import gen_sym_eig
from .ode import assemble_form, assemble_ode, check_conforming, element_weights
from .quadrature import gauss_legendre

NORMS = ("H1", "H2")


def gram_matrix(space, norm, T=None):
    """H1: int phi_i' phi_j'.  H2: int phi_i'' phi_j'' + T^{-2} int phi_i' phi_j'."""
    if norm not in NORMS:
        raise ValidationError(f"norm must be one of {NORMS}, got {norm!r}")
    T = space.interval_length if T is None else T
    rule = gauss_legendre(space.degree + 1)
    local = space.h * rule.nodes
    w = element_weights(space, space.h * rule.weights)
    G = assemble_form(space, local, w, 1, 1)
    if norm == "H2":
        G = assemble_form(space, local, w, 2, 2) + G / T**2
    return 0.5 * (G + G.T)


@dataclass(frozen=True, eq=False)
class CoercivityQuery:
    space: object
    mu: float
    T: float
    norm: str = "H1"

    def __post_init__(self):
        check_conforming(self.space)
        if self.norm not in NORMS:
            raise ValidationError(f"norm must be one of {NORMS}, got {self.norm!r}")


def coercivity_constant(space, mu=None, T=None, norm="H1"):
    """Smallest generalized eigenvalue of (sym(A), G). Accepts a CoercivityQuery."""
    if isinstance(space, CoercivityQuery):
        space, mu, T, norm = space.space, space.mu, space.T, space.norm
    q = CoercivityQuery(space, float(mu), float(T if T is not None else space.interval_length), norm)
    A = assemble_ode(q.space, q.mu, q.T).matrix
    S = 0.5 * (A + A.T)
    G = gram_matrix(q.space, q.norm, q.T)
    lam, _ = gen_sym_eig(S, G, subset=(0, 0))
    return float(lam[0])
