"""Saturated cells: per-slot transmission probability and aggregate throughput.

Sweeps the number of saturated stations for a single-rate cell and shows the
effect of channel errors at the receiver-sensitivity operating point.
"""
from dcf11b import solver
from dcf11b.params import FixedPer, Scenario, StationConfig

print("== saturated single-rate cells (ideal channel) ==")
print(f"{'N':>3} {'rate':>7} {'tau':>10} {'p_col':>9} {'T_av [us]':>10} {'S [Mbps]':>9}")
for rate_class in (4, 1):
    for n in (1, 2, 5, 10, 20):
        scn = Scenario(tuple(StationConfig(rate_class) for _ in range(n)))
        op = solver.solve_operating_point(scn)
        rep = solver.aggregate_throughput(op, scn)
        rate = scn.stations[0].spec.data_rate / 1e6
        print(
            f"{n:3d} {rate:5.1f} M {op.tau[0]:10.6f} {op.p_col[0]:9.5f}"
            f" {op.t_av*1e6:10.1f} {rep.aggregate_bps/1e6:9.4f}"
        )

print("\n== channel errors at the sensitivity point (PER = 8e-2) ==")
print(f"{'N':>3} {'S ideal':>9} {'S dirty':>9} {'drop':>6}")
for n in (2, 5, 10):
    clean = Scenario(tuple(StationConfig(4) for _ in range(n)))
    dirty = Scenario(tuple(StationConfig(4, channel=FixedPer(8e-2)) for _ in range(n)))
    s_clean = solver.aggregate_throughput(solver.solve_operating_point(clean), clean).aggregate_bps
    s_dirty = solver.aggregate_throughput(solver.solve_operating_point(dirty), dirty).aggregate_bps
    print(f"{n:3d} {s_clean/1e6:9.4f} {s_dirty/1e6:9.4f} {(1-s_dirty/s_clean)*100:5.1f}%")

print("\nEven a fully loaded 11 Mbps cell tops out far below the bit rate: headers,")
print("ACKs and the PLCP preamble ride at the 1 Mbps basic rate.")
