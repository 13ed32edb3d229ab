"""Space-time convergence with C^1 and maximal regularity in time."""

from chrono.experiments import ST_H0, spacetime_sweep
from chrono.report import fit_rate

runs = [("C1", 3, 1, 5), ("C1", 4, 1, 4), ("max", 2, 1, 7), ("max", 3, 2, 6)]
for family, p, kt, levels in runs:
    e = spacetime_sweep(p, kt, levels)
    h = [ST_H0 / 2**j for j in range(levels)]
    for n, vals in e.items():
        print(f"{family:3s} p={p} {n}: " + " ".join(f"{v:.3e}" for v in vals)
              + f"  rate {fit_rate(h[-3:], vals[-3:]):.2f}")
