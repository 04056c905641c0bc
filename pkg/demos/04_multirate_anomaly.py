"""Multirate cells: the slowest station sets the pace.

Two experiments.  First, nine loaded 11 Mbps stations share the cell with
one slow station whose packet rate sweeps from idle to saturation, once per
slow-station bit rate.  Second, two fast stations at 5 m share the cell with
a saturated station walking away from the access point, switching down
through the rate classes as its frame error rate hits the 8e-2 threshold.

Run with --plot to also write demo04_anomaly.png (requires matplotlib).
"""
import argparse

import numpy as np

from dcf11b import presets, solver

parser = argparse.ArgumentParser()
parser.add_argument("--plot", action="store_true", help="write demo04_anomaly.png")
args = parser.parse_args()

lam_grid = [float(x) for x in np.geomspace(10.0, 8000.0, 7)]

print("== nine fast stations + one slow station (ideal channel) ==")
print(f"{'lam_slow':>9}" + "".join(f"  {f'slow@{r}M':>10}" for r in (1, 2, 5.5, 11)))
curves = {}
for slow_class in (1, 2, 3, 4):
    bundle = presets.scenario1(per=0.0, slow_rate_class=slow_class)
    curves[slow_class] = solver.sweep(bundle.scenario, 9, lam_grid, bundle.solver)
for i, lam in enumerate(lam_grid):
    row = f"{lam:9.1f}"
    for slow_class in (1, 2, 3, 4):
        row += f"  {curves[slow_class][i][1].aggregate_bps/1e6:10.4f}"
    print(row)
print("(aggregate in Mbps; the 1 Mbps column drags the whole cell down)")

print("\n== two fast stations at 5 m + one saturated station moving away ==")
print(f"{'d [m]':>6} {'class':>6} {'PER':>9} {'S [Mbps]':>9}")
for d in (5.0, 15.0, 21.0, 24.0, 27.0, 35.0, 42.0, 50.0, 58.0, 63.0):
    scn = presets.scenario3(distance_m=d).scenario
    op = solver.solve_operating_point(scn)
    rep = solver.aggregate_throughput(op, scn)
    print(
        f"{d:6.1f} {scn.stations[2].rate_class:6d} {op.p_err[2]:9.2e}"
        f" {rep.aggregate_bps/1e6:9.4f}"
    )
print("(each rate switch steps the aggregate down; once the mover's channel")
print(" degrades it backs off more and the fast pair claws throughput back)")

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for slow_class, label in ((1, "1 Mbps"), (2, "2 Mbps"), (3, "5.5 Mbps"), (4, "11 Mbps")):
        ax.semilogx(
            lam_grid,
            [rep.aggregate_bps / 1e6 for _, rep in curves[slow_class]],
            marker="o",
            label=f"slow station at {label}",
        )
    ax.set_xlabel("slow-station packet rate [pkt/s]")
    ax.set_ylabel("aggregate throughput [Mbps]")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig("demo04_anomaly.png", dpi=120)
    print("\nwrote demo04_anomaly.png")
