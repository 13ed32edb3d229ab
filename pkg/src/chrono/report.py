"""Convergence tables and their CSV serialisation."""

import io
from dataclasses import dataclass, field

import numpy as np


def fit_rate(h, err):
    """Least-squares slope of log(err) against log(h)."""
    h = np.asarray(h, dtype=float)
    err = np.asarray(err, dtype=float)
    ok = (h > 0) & (err > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(h[ok]), np.log(err[ok]), 1)[0])


def fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".15g")


@dataclass
class ConvergenceReport:
    experiment: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    rate_window: int = 3

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name):
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def rates(self, h_column, norms):
        """Slopes over the finest `rate_window` rows; empty when fewer than 3 rows."""
        if len(self.rows) < 3:
            return {}
        order = np.argsort(-self.column(h_column), kind="stable")
        sel = order[-self.rate_window:]
        h = self.column(h_column)[sel]
        return {n: fit_rate(h, self.column(n)[sel]) for n in norms}

    def to_csv(self, rates=None):
        out = io.StringIO()
        out.write(f"# experiment={self.experiment}\n")
        for k, v in self.params.items():
            out.write(f"# {k}={fmt(v) if not isinstance(v, (list, tuple)) else ' '.join(map(fmt, v))}\n")
        for k, v in (rates or {}).items():
            out.write(f"# rate_{k}={fmt(v)}\n")
        out.write(",".join(self.columns) + "\n")
        for r in self.rows:
            out.write(",".join(fmt(v) for v in r) + "\n")
        return out.getvalue()
