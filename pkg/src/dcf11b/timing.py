"""Expected slot-time decomposition of the multirate DCF cell.

Every chain slot is one of four events: idle, success, collision, or a
channel-error loss.  Their probability-weighted durations sum to the
expected time per slot, which converts chain statistics to wall time.
Collisions are attributed to the slowest participating rate class and
billed at that class's collision duration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .params import N_RATE_CLASSES, NetworkParams, RATE_CLASSES, Scenario


@dataclass(frozen=True)
class SlotBreakdown:
    """Expected per-slot durations and the event probabilities behind them."""

    t_idle: float
    t_success: float
    t_collision: float
    t_error: float
    t_av: float
    p_busy: float
    p_success: tuple[float, ...]  # per station
    p_collision_class: tuple[float, ...]  # per rate class 1..4


def busy_prob(tau: Sequence[float]) -> float:
    """Probability that at least one station transmits in a slot."""
    return 1.0 - math.prod(1.0 - t for t in tau)


def success_prob(s: int, tau: Sequence[float]) -> float:
    """Probability that exactly station ``s`` transmits in a slot."""
    return tau[s] * math.prod(1.0 - t for j, t in enumerate(tau) if j != s)


def success_duration(params: NetworkParams, data_rate: float, payload_bytes: int) -> float:
    """Air time of one successful exchange: data frame, SIFS, ACK, DIFS."""
    if data_rate <= 0:
        raise ValueError("data_rate must be positive")
    h_phy = params.plcp_bits / params.basic_rate
    data = 8.0 * (params.mac_header_bytes + payload_bytes) / data_rate
    ack = (params.plcp_bits + 8.0 * params.ack_bytes) / params.basic_rate
    return (
        h_phy
        + data
        + params.prop_delay_s
        + params.sifs_s
        + ack
        + params.prop_delay_s
        + params.difs_s
    )


def collision_duration(params: NetworkParams, data_rate: float, payload_bytes: int) -> float:
    """Channel occupancy of a failed frame: data frame then the ACK timeout."""
    if data_rate <= 0:
        raise ValueError("data_rate must be positive")
    h_phy = params.plcp_bits / params.basic_rate
    data = 8.0 * (params.mac_header_bytes + payload_bytes) / data_rate
    return h_phy + data + params.ack_timeout_s


def intra_class_collision_prob(r: int, class_ids: Sequence[int], tau: Sequence[float]) -> float:
    """Probability of a collision entirely inside rate class ``r``.

    At least two members of the class transmit while every station outside
    the class stays silent.  Empty and single-member classes yield 0.
    """
    members = [s for s, c in enumerate(class_ids) if c == r]
    silent_in = math.prod(1.0 - tau[s] for s in members)
    one_in = sum(
        tau[s] * math.prod(1.0 - tau[j] for j in members if j != s) for s in members
    )
    silent_out = math.prod(
        1.0 - tau[s] for s in range(len(tau)) if class_ids[s] != r
    )
    return (1.0 - (silent_in + one_in)) * silent_out


def inter_class_collision_prob(r: int, class_ids: Sequence[int], tau: Sequence[float]) -> float:
    """Probability of a collision between class ``r`` and a faster class.

    At least one member of class r and at least one member of a higher
    class transmit while every lower class stays silent; the event is thus
    attributed to its slowest class.  Empty products count as 1.
    """
    any_in = 1.0 - math.prod(
        1.0 - tau[s] for s, c in enumerate(class_ids) if c == r
    )
    any_above = 1.0 - math.prod(
        1.0 - tau[s] for s, c in enumerate(class_ids) if c > r
    )
    silent_below = math.prod(
        1.0 - tau[s] for s, c in enumerate(class_ids) if c < r
    )
    return any_in * any_above * silent_below


def class_collision_prob(r: int, class_ids: Sequence[int], tau: Sequence[float]) -> float:
    """Total collision probability attributed to rate class ``r``."""
    return intra_class_collision_prob(r, class_ids, tau) + inter_class_collision_prob(
        r, class_ids, tau
    )


def slot_breakdown(
    scn: Scenario, tau: Sequence[float], p_err: Sequence[float]
) -> SlotBreakdown:
    """Expected slot-time decomposition at a given transmission-probability vector.

    Per-station success and error durations use each station's own payload;
    the per-class collision duration uses the largest payload in the class,
    since the slowest frame keeps the channel busy.
    """
    n = scn.n_stations
    if len(tau) != n or len(p_err) != n:
        raise ValueError("tau and p_err must have one entry per station")
    params = scn.params
    class_ids = scn.class_ids()

    p_busy = busy_prob(tau)
    p_succ = tuple(success_prob(s, tau) for s in range(n))

    t_succ_station = [
        success_duration(params, scn.stations[s].spec.data_rate, scn.payload_bytes(s))
        for s in range(n)
    ]
    t_err_station = [
        collision_duration(params, scn.stations[s].spec.data_rate, scn.payload_bytes(s))
        for s in range(n)
    ]

    p_coll_class = []
    t_coll_class = []
    for r in range(1, N_RATE_CLASSES + 1):
        p_coll_class.append(class_collision_prob(r, class_ids, tau))
        payloads = [scn.payload_bytes(s) for s in range(n) if class_ids[s] == r]
        pl = max(payloads) if payloads else params.payload_bytes
        t_coll_class.append(collision_duration(params, RATE_CLASSES[r].data_rate, pl))

    t_idle = (1.0 - p_busy) * params.slot_s
    t_success = sum(
        p_succ[s] * (1.0 - p_err[s]) * t_succ_station[s] for s in range(n)
    )
    t_collision = sum(p * t for p, t in zip(p_coll_class, t_coll_class))
    t_error = sum(p_succ[s] * p_err[s] * t_err_station[s] for s in range(n))
    t_av = t_idle + t_success + t_collision + t_error

    return SlotBreakdown(
        t_idle=t_idle,
        t_success=t_success,
        t_collision=t_collision,
        t_error=t_error,
        t_av=t_av,
        p_busy=p_busy,
        p_success=p_succ,
        p_collision_class=tuple(p_coll_class),
    )
