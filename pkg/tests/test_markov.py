"""Backoff-chain closed forms against explicit state-space reconstruction."""
import math

import numpy as np
import pytest

from dcf11b import markov


def reconstruct_states(q, w0, m, p_eq):
    """Every stationary state probability, built from the per-stage recursions.

    Independent oracle: stage heads follow b_{i,0} = p^i * b00 (last stage
    p^m/(1-p) * b00), in-stage states scale as (W_i - k)/W_i times the
    stage's inflow, and the idle mass is (1-q)/q * b00.  Only b00 is taken
    from the closed form under test.
    """
    st = markov.chain_state(q, w0, m, p_eq)
    heads = []
    for i in range(m + 1):
        if i < m:
            heads.append(p_eq**i * st.b00)
        else:
            heads.append(p_eq**m / (1.0 - p_eq) * st.b00)
    states = []
    for i, head in enumerate(heads):
        w_i = (1 << i) * w0
        for k in range(w_i):
            states.append((w_i - k) / w_i * head)
    return states, heads, st


class TestEquivalentFailureProb:
    def test_zero_inputs(self):
        assert markov.equivalent_failure_prob(0.0, 0.0) == 0.0

    def test_collapses_to_collision_only(self):
        assert markov.equivalent_failure_prob(0.1, 0.0) == pytest.approx(0.1, abs=0)

    def test_direct_substitution(self):
        assert markov.equivalent_failure_prob(0.2, 0.1) == pytest.approx(0.28, abs=1e-15)

    def test_matches_complement_product(self):
        rng = np.random.default_rng(7)
        for pc, pe in rng.random((200, 2)):
            assert markov.equivalent_failure_prob(pc, pe) == pytest.approx(
                1.0 - (1.0 - pc) * (1.0 - pe), abs=1e-15
            )


class TestBackoffOccupancy:
    def test_ideal_channel_collapses_to_half_window(self):
        assert markov.backoff_occupancy(32, 5, 0.0) == pytest.approx(16.5, abs=0)

    def test_pole_value_is_exact(self):
        # removable singularity of the geometric closed form at 2*p_eq = 1
        assert markov.backoff_occupancy(32, 5, 0.5) == pytest.approx(113.0, abs=1e-12)

    def test_pole_neighbourhood_is_continuous(self):
        for eps in (1e-7, -1e-7):
            assert markov.backoff_occupancy(32, 5, 0.5 + eps) == pytest.approx(
                113.0, rel=1e-5
            )

    def test_quarter_failure_value(self):
        # arbitrary-precision evaluation gives exactly 97/3
        assert markov.backoff_occupancy(32, 5, 0.25) == pytest.approx(97.0 / 3.0, rel=1e-14)

    def test_certain_failure_rejected(self):
        with pytest.raises(ValueError):
            markov.backoff_occupancy(32, 5, 1.0)


class TestTransmitProb:
    def test_saturated_ideal(self):
        tau = markov.transmit_prob(0.0, markov.backoff_occupancy(32, 5, 0.0), 0.0)
        assert tau == pytest.approx(2.0 / 33.0, rel=1e-15)

    def test_always_idle(self):
        assert markov.transmit_prob(1.0, 20.0, 0.3) == 0.0

    def test_direct_evaluation(self):
        tau = markov.transmit_prob(0.5, 97.0 / 3.0, 0.25)
        assert tau == pytest.approx(2.0 / 97.0, rel=1e-14)


class TestTransmitProbSmallQueue:
    def test_saturated_reduces_to_ideal_form(self):
        assert markov.transmit_prob_small_queue(1.0, 32, 5, 0.0) == pytest.approx(
            2.0 / 33.0, rel=1e-15
        )

    def test_no_traffic(self):
        assert markov.transmit_prob_small_queue(0.0, 32, 5, 0.3) == 0.0

    def test_frozen_value(self):
        # arbitrary-precision evaluation of the expanded denominator form
        assert markov.transmit_prob_small_queue(0.3, 32, 5, 0.2) == pytest.approx(
            0.042291547780426795, rel=1e-14
        )

    def test_expanded_denominator_form_agrees(self):
        # same quantity through the explicit D(q, W0, m, p) polynomial
        rng = np.random.default_rng(11)
        for _ in range(500):
            q = rng.uniform(0.01, 1.0)
            p = rng.uniform(0.0, 0.95)
            w0 = int(rng.integers(1, 33))
            m = int(rng.integers(0, 6))
            if abs(1.0 - 2.0 * p) < 1e-3:
                continue  # the expanded form itself cancels there
            d = q * ((w0 + 1) * (1 - 2 * p) + w0 * p * (1 - (2 * p) ** m)) + 2 * (
                1 - q
            ) * (1 - p) * (1 - 2 * p)
            expected = 2 * (1 - 2 * p) * q / d
            got = markov.transmit_prob_small_queue(q, w0, m, p)
            assert got == pytest.approx(expected, rel=1e-10)

    def test_regular_at_half_failure(self):
        tau = markov.transmit_prob_small_queue(0.4, 32, 5, 0.5)
        below = markov.transmit_prob_small_queue(0.4, 32, 5, 0.5 - 1e-9)
        above = markov.transmit_prob_small_queue(0.4, 32, 5, 0.5 + 1e-9)
        assert tau == pytest.approx(below, rel=1e-7)
        assert tau == pytest.approx(above, rel=1e-7)

    def test_consistency_with_general_form(self):
        # idle mass from the chain state plugged into the general form
        rng = np.random.default_rng(3)
        for _ in range(1000):
            q = rng.uniform(0.0, 1.0)
            p = rng.uniform(0.0, 0.99)
            w0 = int(rng.integers(1, 33))
            m = int(rng.integers(0, 6))
            st = markov.chain_state(q, w0, m, p)
            via_general = markov.transmit_prob(st.b_idle, st.alpha, p)
            direct = markov.transmit_prob_small_queue(q, w0, m, p)
            assert abs(via_general - direct) <= 1e-12

    def test_monotone_in_q(self):
        taus = [
            markov.transmit_prob_small_queue(q, 32, 5, 0.2)
            for q in np.linspace(0.0, 1.0, 50)
        ]
        assert all(b >= a for a, b in zip(taus, taus[1:]))

    def test_monotone_in_w0(self):
        taus = [
            markov.transmit_prob_small_queue(0.4, w0, 5, 0.2) for w0 in (1, 2, 4, 8, 16, 32)
        ]
        assert all(b <= a for a, b in zip(taus, taus[1:]))


class TestQueueNonemptyProb:
    def test_zero_rate(self):
        assert markov.queue_nonempty_prob(0.0, 1e-3) == 0.0

    def test_half_at_log_two(self):
        assert markov.queue_nonempty_prob(math.log(2.0) / 1e-3, 1e-3) == pytest.approx(
            0.5, rel=1e-12
        )

    def test_saturation_regime(self):
        assert markov.queue_nonempty_prob(8000.0, 2e-3) == pytest.approx(
            1.0 - math.exp(-16.0), rel=1e-12
        )

    def test_infinite_rate_pins_one(self):
        assert markov.queue_nonempty_prob(math.inf, 1e-3) == 1.0


class TestStateReconstruction:
    def test_head_recursions(self):
        _, heads, st = reconstruct_states(0.7, 32, 5, 0.3)
        assert heads[5] == pytest.approx(0.3**5 / 0.7 * st.b00, rel=1e-12)
        assert sum(heads) == pytest.approx(st.b00 / (1.0 - 0.3), rel=1e-12)
        assert sum(heads) == pytest.approx(st.tau, rel=1e-12)

    def test_normalization_random_draws(self):
        rng = np.random.default_rng(99)
        for trial in range(1000):
            w0 = int(rng.integers(1, 33))
            m = int(rng.integers(0, 6))
            q = rng.uniform(0.0, 1.0)
            if trial % 5 == 0:
                p = 0.5 + rng.uniform(-1e-9, 1e-9)  # straddle the pole
            else:
                p = rng.uniform(0.0, 0.999)
            states, _, st = reconstruct_states(q, w0, m, p)
            total = math.fsum(states) + st.b_idle
            assert abs(total - 1.0) <= 1e-12
