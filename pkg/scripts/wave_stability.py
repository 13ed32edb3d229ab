"""Space-time errors with fixed ht = 1/8 while hx shrinks by up to 512x."""

import argparse

from chrono.experiments import stability_sweep

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--p", type=int, nargs="+", default=[2, 3, 4])
ap.add_argument("--max-power", type=int, default=9, help="largest ratio is 2**max_power")
args = ap.parse_args()

ratios = [2**j for j in range(args.max_power + 1)]
for p in args.p:
    e = stability_sweep(p, ratios)
    for j, r in enumerate(ratios):
        print(f"p={p} ht/hx={r:4d} " + " ".join(f"{n}={e[n][j]:.4e}" for n in e))
