"""Print the H1 coercivity constants for T in {1, 3}, p in {2, 3}, mu in {10, 1e5}."""

from chrono.experiments import table1_column

if __name__ == "__main__":
    print("T,p,mu," + ",".join(f"N={8 * 2**j}" for j in range(8)))
    for T in (1.0, 3.0):
        for p in (2, 3):
            for mu in (10.0, 1e5):
                vals = table1_column(T, p, mu)
                print(f"{T:g},{p},{mu:g}," + ",".join(f"{v:.4g}" for v in vals))
