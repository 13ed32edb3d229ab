"""H1 errors of Q_h for regularity p-1, p-2, p-3 and nodal rates of P_h."""

import numpy as np

from chrono import nodal_error, project_ph
from chrono.experiments import ODE_H0, qh_sweep
from chrono.report import fit_rate

h = [ODE_H0 / 2**j for j in range(4)]
for off in (1, 2, 3):
    for p in range(off + 1, 7):
        e = qh_sweep(p, p - off)
        print(f"k=p-{off} p={p}: " + " ".join(f"{v:.4e}" for v in e) + f"  rate {fit_rate(h[-3:], e[-3:]):.2f}")

for p in (2, 3, 4):
    v = lambda t, p=p: np.asarray(t, dtype=float) ** (p + 1)
    hs = [1 / 4, 1 / 8, 1 / 16, 1 / 32]
    errs = [nodal_error(v, project_ph(v, p, round(1 / x), 1.0)) for x in hs]
    print(f"nodal p={p}: rate {fit_rate(hs[-3:], errs[-3:]):.2f} (expected {p + p % 2})")
