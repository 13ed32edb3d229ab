"""Uniform B-spline spaces on an interval and basis evaluation.

Basis functions and their derivatives are computed with the Cox-de Boor
recursion in the form of Algorithm A2.3 of Piegl & Tiller, vectorised over
the points of a single knot span.

Homogeneous boundary constraints are realised by dropping the first and/or
last B-spline of the open knot vector; these are exactly the splines that do
not vanish at the corresponding endpoint.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

CONSTRAINTS = ("none", "left_zero", "both_ends_zero")

# relative snapping distance for points lying on a breakpoint
_SNAP = 1e-12


def _ders_basis_funs(knots, p, span, x, nd):
    """Values and derivatives up to order `nd` of the p+1 B-splines active on `span`.

    Returns an array of shape (nd + 1, p + 1, len(x)).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = x.size
    ndu = np.empty((p + 1, p + 1, m))
    left = np.empty((p + 1, m))
    right = np.empty((p + 1, m))
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = np.zeros(m)
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders = np.zeros((nd + 1, p + 1, m))
    ders[0] = ndu[:, p]
    kmax = min(nd, p)
    a = np.empty((2, p + 1, m))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, kmax + 1):
            d = np.zeros(m)
            rk, pk = r - k, p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d += a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1
    fac = p
    for k in range(1, kmax + 1):
        ders[k] *= fac
        fac *= p - k
    return ders


@dataclass(frozen=True, eq=False)
class SplineSpace:
    """Spline space of degree `degree` and C^`regularity` continuity on a uniform mesh
    of (0, `interval_length`) with `n_elements` elements.
    """

    interval_length: float
    n_elements: int
    degree: int
    regularity: int
    constraint: str = "none"
    knots: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        T, N, p, k = self.interval_length, self.n_elements, self.degree, self.regularity
        if not (isinstance(N, (int, np.integer)) and N > 0):
            raise ValidationError(f"n_elements must be a positive integer, got {N!r}")
        if not T > 0:
            raise ValidationError(f"interval_length must be positive, got {T!r}")
        if not (isinstance(p, (int, np.integer)) and p >= 1):
            raise ValidationError(f"degree must be an integer >= 1, got {p!r}")
        if not (isinstance(k, (int, np.integer)) and 0 <= k <= p - 1):
            raise ValidationError(f"regularity must satisfy 0 <= k <= p-1 = {p - 1}, got {k!r}")
        if self.constraint not in CONSTRAINTS:
            raise ValidationError(f"constraint must be one of {CONSTRAINTS}, got {self.constraint!r}")
        mult = p - k
        interior = np.repeat(np.arange(1, N) * (T / N), mult)
        knots = np.concatenate([np.zeros(p + 1), interior, np.full(p + 1, float(T))])
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)

    @property
    def h(self):
        return self.interval_length / self.n_elements

    @property
    def multiplicity(self):
        return self.degree - self.regularity

    @property
    def breakpoints(self):
        return np.linspace(0.0, self.interval_length, self.n_elements + 1)

    @property
    def full_dim(self):
        return self.n_elements * (self.degree - self.regularity) + self.regularity + 1

    @property
    def offset(self):
        """Number of functions dropped at the left end."""
        return 0 if self.constraint == "none" else 1

    @property
    def dim(self):
        return self.full_dim - {"none": 0, "left_zero": 1, "both_ends_zero": 2}[self.constraint]

    @property
    def kept(self):
        """Slice selecting the retained functions in the unconstrained numbering."""
        stop = self.full_dim - (1 if self.constraint == "both_ends_zero" else 0)
        return slice(self.offset, stop)

    def with_constraint(self, constraint):
        return SplineSpace(self.interval_length, self.n_elements, self.degree,
                           self.regularity, constraint)

    def span(self, e):
        return self.degree + e * self.multiplicity

    def element_of(self, t):
        """Element index; breakpoints belong to the element on their right, T to the last."""
        t = np.asarray(t, dtype=float)
        T, N = self.interval_length, self.n_elements
        if np.any(t < 0) or np.any(t > T):
            bad = t[(t < 0) | (t > T)]
            raise ValidationError(f"evaluation point(s) {bad} outside [0, {T}]")
        s = t * (N / T)
        r = np.rint(s)
        s = np.where(np.abs(s - r) <= _SNAP * max(N, 1), r, s)
        return np.clip(np.floor(s).astype(int), 0, N - 1)

    def element_ders(self, e, t, nd):
        """First active (unconstrained) index and derivative table on element `e`.

        The table has shape (nd + 1, p + 1, len(t)); points are taken to lie in
        element `e` (no range check, so one-sided limits at breakpoints are explicit).
        """
        span = self.span(e)
        return span - self.degree, _ders_basis_funs(self.knots, self.degree, span, t, nd)

    def element_tables(self, local_nodes, nd):
        """Derivative tables at ``t_e + local_nodes`` for every element.

        Returns (first, table) with first of shape (N,) in the unconstrained
        numbering and table of shape (N, nd + 1, len(local_nodes), p + 1).
        """
        local_nodes = np.asarray(local_nodes, dtype=float)
        N, p = self.n_elements, self.degree
        first = np.empty(N, dtype=int)
        table = np.empty((N, nd + 1, local_nodes.size, p + 1))
        for e in range(N):
            first[e], d = self.element_ders(e, e * self.h + local_nodes, nd)
            table[e] = d.transpose(0, 2, 1)
        return first, table

    def eval_basis(self, t, d=0):
        """d-th derivatives of the basis functions active at the scalar `t`.

        Returns ``(first, values)``: `values` holds p+1 entries for the functions
        with indices first, ..., first+p in the constrained numbering. Entries for
        functions removed by the constraint are zero (their index falls outside
        ``range(dim)``, so `first` may be -1).
        """
        if not 0 <= d <= self.degree:
            raise ValidationError(f"derivative order must be in [0, {self.degree}], got {d}")
        e = int(self.element_of(float(t)))
        first, ders = self.element_ders(e, [float(t)], d)
        values = ders[d, :, 0].copy()
        idx = first + np.arange(self.degree + 1)
        keep = self.kept
        values[(idx < keep.start) | (idx >= keep.stop)] = 0.0
        return first - self.offset, values

    def basis_matrix(self, t, d=0):
        """Dense matrix B with B[m, i] = d-th derivative of basis function i at t[m]."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        elems = self.element_of(t)
        out = np.zeros((t.size, self.full_dim))
        for e in np.unique(elems):
            sel = np.nonzero(elems == e)[0]
            first, ders = self.element_ders(int(e), t[sel], d)
            out[sel[:, None], first + np.arange(self.degree + 1)[None, :]] = ders[d].T
        return out[:, self.kept]

    def greville(self):
        """Greville abscissae of the retained functions."""
        p = self.degree
        kn = self.knots
        g = np.array([kn[i + 1:i + p + 1].mean() for i in range(self.full_dim)])
        return g[self.kept]


def build_space(T, N, p, k, constraint="none"):
    return SplineSpace(float(T), int(N), int(p), int(k), constraint)


def eval_basis(space, t, d=0):
    return space.eval_basis(t, d)
