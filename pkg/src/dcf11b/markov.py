"""Stationary quantities of the per-station DCF backoff chain.

The chain has backoff stages 0..m with window W_i = 2^i * W0 (a failed
attempt in stage m re-draws in stage m, packets are never dropped) plus an
idle state entered when the queue empties after a success.  Closed forms
below give the stage-0 head probability b00, the idle probability b_idle
and the per-slot transmission probability tau without materialising the
state space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class StationChainState:
    """Solved chain quantities for one station at a given load."""

    p_eq: float  # per-attempt failure probability (collision or channel error)
    q: float  # queue non-empty probability right after a success
    p_idle_exit: float  # arrival probability per slot while idle (= q here)
    alpha: float  # occupancy factor linking b00 to the non-idle probability mass
    b00: float  # stationary probability of the stage-0, counter-0 state
    b_idle: float  # stationary probability of the empty-queue idle state
    tau: float  # probability of starting a transmission in a random slot


def equivalent_failure_prob(p_col: float, p_err: float) -> float:
    """Probability an attempt fails by collision, channel error or both."""
    return p_col + p_err - p_col * p_err


def backoff_occupancy(w0: int, m: int, p_eq: float) -> float:
    """Occupancy factor alpha such that all non-idle states sum to alpha*b00.

    Evaluated through the explicit power sum over stages, which stays exact
    at the 2*p_eq = 1 pole of the equivalent geometric closed form.
    """
    if not 0.0 <= p_eq < 1.0:
        raise ValueError(f"p_eq must lie in [0, 1), got {p_eq}")
    x = 2.0 * p_eq
    geo = 0.0  # sum_{i<m} (2 p_eq)^i
    xi = 1.0
    for _ in range(m):
        geo += xi
        xi *= x
    # xi is now (2 p_eq)^m
    return 0.5 * (w0 * (geo + xi / (1.0 - p_eq)) + 1.0 / (1.0 - p_eq))


def transmit_prob(b_idle: float, alpha: float, p_eq: float) -> float:
    """Per-slot transmission probability given the idle mass and occupancy."""
    return (1.0 - b_idle) / (alpha * (1.0 - p_eq))


def transmit_prob_small_queue(q: float, w0: int, m: int, p_eq: float) -> float:
    """Per-slot transmission probability under the small-queue closure.

    Uses the arrival-per-slot probability q both for the post-success queue
    state and for leaving the idle state.  q = 1 recovers the saturated
    chain, q = 0 gives a silent station.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if p_eq == 1.0:
        # every attempt fails: the chain cycles the last stage forever, one
        # attempt per full window, independent of the traffic level
        return 0.0 if q == 0.0 else 2.0 / ((1 << m) * w0 + 1.0)
    alpha = backoff_occupancy(w0, m, p_eq)
    denom = q * (alpha - 1.0) + 1.0
    if denom <= 0.0:
        raise ValueError("degenerate chain parameters: occupancy denominator <= 0")
    return q / ((1.0 - p_eq) * denom)


def queue_nonempty_prob(lam: float, t_av: float) -> float:
    """Probability of at least one Poisson arrival in one expected slot."""
    if lam < 0:
        raise ValueError("packet rate must be >= 0")
    if t_av <= 0:
        raise ValueError("expected slot time must be positive")
    if math.isinf(lam):
        return 1.0
    return -math.expm1(-lam * t_av)


def chain_state(q: float, w0: int, m: int, p_eq: float) -> StationChainState:
    """Solve the chain for one station; q doubles as the idle-exit probability."""
    alpha = backoff_occupancy(w0, m, p_eq)
    denom = q * (alpha - 1.0) + 1.0
    b00 = q / denom
    b_idle = (1.0 - q) / denom
    tau = b00 / (1.0 - p_eq)
    return StationChainState(
        p_eq=p_eq, q=q, p_idle_exit=q, alpha=alpha, b00=b00, b_idle=b_idle, tau=tau
    )
