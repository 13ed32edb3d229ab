"""Relative errors and rates of the ODE solver for C^1 and maximal-regularity splines."""

import argparse

from chrono.experiments import ODE_H0, ode_sweep
from chrono.report import fit_rate

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--levels", type=int, default=4)
args = ap.parse_args()

h = [ODE_H0 / 2**j for j in range(args.levels)]
for family in ("C1", "max"):
    for p in range(2, 7):
        k = 1 if family == "C1" else p - 1
        e = ode_sweep(p, k, args.levels)
        for norm, vals in e.items():
            rate = fit_rate(h[-3:], vals[-3:])
            print(f"{family:3s} p={p} {norm}: " + " ".join(f"{v:.4e}" for v in vals) + f"  rate {rate:.2f}")
