"""Unsaturated cells: throughput as a straight line in the offered load.

For light traffic the aggregate throughput is payload times the summed
packet rates, independent of the frame error rate.  The demo sweeps a
two-station cell through the validity region, shows where the linear model
starts to bend, and prints the per-class critical rates that bound the
region.
"""
from dcf11b import solver
from dcf11b.params import FixedPer, NetworkParams, RATE_CLASSES, Scenario, StationConfig

params = NetworkParams()

print("== critical packet rates (1028-byte payload) ==")
print(f"{'class':>6} {'rate':>8} {'lambda_c [pkt/s]':>17} {'lambda_c/2':>11}")
lam_c4 = None
for r in (1, 2, 3, 4):
    lam_c = solver.critical_rate(RATE_CLASSES[r], params, 1028)
    if r == 4:
        lam_c4 = lam_c
    print(f"{r:6d} {RATE_CLASSES[r].data_rate/1e6:6.1f} M {lam_c:17.1f} {lam_c/2:11.1f}")

print("\n== two 11 Mbps stations, equal load, ideal channel ==")
print(f"{'lam each':>9} {'S model':>12} {'S linear':>12} {'gap':>7} {'in region':>10}")
for frac in (0.01, 0.02, 0.05, 0.0833, 0.125, 0.25, 0.5, 1.0):
    lam = frac * lam_c4
    scn = Scenario((StationConfig(4, lam), StationConfig(4, lam)))
    rep = solver.aggregate_throughput(solver.solve_operating_point(scn), scn)
    gap = (rep.linear_model_bps - rep.aggregate_bps) / rep.aggregate_bps
    print(
        f"{lam:9.1f} {rep.aggregate_bps:12.0f} {rep.linear_model_bps:12.0f}"
        f" {gap*100:6.2f}% {str(rep.in_region_d):>10}"
    )

print("\n== the same grid with PER = 8e-2 on both stations ==")
print(f"{'lam each':>9} {'S ideal':>12} {'S dirty':>12} {'shift':>7}")
for frac in (0.02, 0.0833, 0.25):
    lam = frac * lam_c4
    clean = Scenario((StationConfig(4, lam), StationConfig(4, lam)))
    dirty = Scenario(
        (StationConfig(4, lam, channel=FixedPer(8e-2)),
         StationConfig(4, lam, channel=FixedPer(8e-2)))
    )
    s0 = solver.aggregate_throughput(solver.solve_operating_point(clean), clean).aggregate_bps
    s8 = solver.aggregate_throughput(solver.solve_operating_point(dirty), dirty).aggregate_bps
    print(f"{lam:9.1f} {s0:12.0f} {s8:12.0f} {abs(s8-s0)/s0*100:6.2f}%")

print("\nInside the validity region the channel error rate barely moves the")
print("aggregate: failed frames are simply retried before the queue builds up.")
print("The model's small-queue closure undershoots the offered load by an")
print("amount that grows with lambda, crossing 2% near lambda_c/11 per station.")
