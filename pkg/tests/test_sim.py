"""Simulator behavior: determinism, conservation, and model agreement."""
import math

import pytest

from dcf11b import presets, sim, solver
from dcf11b.params import FixedPer, Scenario, StationConfig


def saturated_cell(n, rate_class=4):
    return Scenario(tuple(StationConfig(rate_class) for _ in range(n)))


class TestEdges:
    def test_zero_duration_yields_empty_report(self):
        rep = sim.run(saturated_cell(2), 0.0, seed=1)
        assert rep.slots_observed == 0
        assert rep.aggregate_throughput_bps == 0.0
        assert rep.attempts == (0, 0)

    def test_silent_station_never_attempts(self):
        scn = Scenario((StationConfig(4, 0.0),))
        rep = sim.run(scn, 50.0, seed=3)
        assert rep.attempts == (0,)
        assert rep.aggregate_throughput_bps == 0.0

    def test_bad_capacity_rejected(self):
        with pytest.raises(ValueError):
            sim.run(saturated_cell(1), 1.0, seed=1, queue_capacity=0)


class TestDeterminism:
    def test_identical_inputs_identical_reports(self):
        scn = presets.scenario2(per=8e-2, lambda_pkt_s=100.0).scenario
        a = sim.run(scn, 20.0, seed=42)
        b = sim.run(scn, 20.0, seed=42)
        assert a == b

    def test_seed_changes_outcome(self):
        scn = presets.scenario2(per=8e-2, lambda_pkt_s=100.0).scenario
        a = sim.run(scn, 20.0, seed=42)
        b = sim.run(scn, 20.0, seed=43)
        assert a != b

    def test_batch_is_seed_ordered_and_reproducible(self):
        scn = saturated_cell(2)
        r1 = sim.batch(scn, 10.0, seeds=(7, 8, 9))
        r2 = sim.batch(scn, 10.0, seeds=(7, 8, 9))
        assert r1 == r2
        assert [r.seed for r in r1.reports] == [7, 8, 9]
        singles = [sim.run(scn, 10.0, seed=s) for s in (7, 8, 9)]
        assert list(r1.reports) == singles


class TestConservationAndCounters:
    def test_attempts_decompose_exactly(self):
        scn = presets.scenario2(per=0.15, lambda_pkt_s=200.0).scenario
        rep = sim.run(scn, 30.0, seed=5)
        for s in range(scn.n_stations):
            assert rep.attempts[s] == (
                rep.successes[s] + rep.collisions[s] + rep.channel_error_losses[s]
            )

    def test_delivered_bits_follow_successes(self):
        scn = saturated_cell(3)
        rep = sim.run(scn, 10.0, seed=2)
        for s in range(3):
            assert rep.delivered_payload_bits[s] == rep.successes[s] * 1028 * 8
        assert rep.aggregate_throughput_bps == pytest.approx(
            sum(rep.delivered_payload_bits) / rep.virtual_time_s, rel=1e-12
        )

    def test_channel_errors_only_with_error_prone_channel(self):
        clean = sim.run(saturated_cell(2), 10.0, seed=1)
        assert sum(clean.channel_error_losses) == 0
        dirty_scn = Scenario(
            tuple(StationConfig(4, channel=FixedPer(0.3)) for _ in range(2))
        )
        dirty = sim.run(dirty_scn, 10.0, seed=1)
        assert sum(dirty.channel_error_losses) > 0


class TestAgainstAnalyticalModel:
    def test_single_saturated_station(self):
        scn = saturated_cell(1)
        rep = sim.run(scn, 100.0, seed=11)
        tau = 2.0 / 33.0
        se = math.sqrt(tau * (1 - tau) / rep.slots_observed)
        assert abs(rep.tau_estimate[0] - tau) <= 3 * se
        op = solver.solve_operating_point(scn)
        model = solver.aggregate_throughput(op, scn).aggregate_bps
        assert abs(rep.aggregate_throughput_bps - model) / model <= 0.02

    def test_low_load_little_law(self):
        # delivered rate approaches the offered rate when queues stay short
        scn = Scenario((StationConfig(4, 5.0), StationConfig(4, 5.0)))
        rep = sim.batch(scn, 200.0, seeds=(1, 2, 3))
        offered = 5.0 * 8224
        for s in range(2):
            assert abs(rep.per_station_mean_bps[s] - offered) / offered <= 0.03

    def test_saturated_multirate_cell(self):
        scn = Scenario((StationConfig(4), StationConfig(4), StationConfig(1)))
        rep = sim.batch(scn, 60.0, seeds=(1, 2, 3))
        op = solver.solve_operating_point(scn)
        model = solver.aggregate_throughput(op, scn).aggregate_bps
        assert abs(rep.aggregate_mean_bps - model) / model <= 0.05

    def test_knee_bias_is_bounded_and_documented(self):
        # around the saturation knee the small-queue closure overshoots the
        # simulated cell; the gap stays within single-digit percent
        scn = presets.scenario2(per=0.0, lambda_pkt_s=30.0).scenario
        op = solver.solve_operating_point(scn)
        model = solver.aggregate_throughput(op, scn).aggregate_bps
        rep = sim.batch(scn, 100.0, seeds=(1, 2, 3, 4, 5))
        dev = (rep.aggregate_mean_bps - model) / model
        assert -0.10 <= dev <= -0.03

    def test_performance_anomaly(self):
        fast = presets.scenario1(per=0.0, slow_rate_class=4).scenario
        slow = presets.scenario1(per=0.0, slow_rate_class=1).scenario
        s_fast = sim.run(fast, 30.0, seed=9).aggregate_throughput_bps
        s_slow = sim.run(slow, 30.0, seed=9).aggregate_throughput_bps
        assert s_slow < s_fast


class TestQueueCapacity:
    def test_capacity_changes_unsaturated_dynamics_only(self):
        sat = saturated_cell(2)
        assert sim.run(sat, 10.0, seed=4, queue_capacity=1) == sim.run(
            sat, 10.0, seed=4, queue_capacity=5
        )
        unsat = Scenario((StationConfig(4, 400.0), StationConfig(4, 400.0)))
        assert sim.run(unsat, 10.0, seed=4, queue_capacity=1) != sim.run(
            unsat, 10.0, seed=4, queue_capacity=5
        )
