"""Discrete-event simulator of the 2-way basic-access DCF.

Engine semantics, matching the slot structure of the analytical model:

* Time advances boundary to boundary.  A slot with no transmitter costs
  one empty-slot time; a slot with transmitters is busy for the frame
  exchange it carries (success, channel-error loss, or collision).
* Every station whose backoff counter is zero at a boundary transmits in
  that slot.  A sole transmitter succeeds unless a Bernoulli draw with its
  frame error probability fails it; two or more transmitters collide and
  the channel stays busy for the slowest participant's collision time.
* Failed transmitters move up one backoff stage (capped at the last stage,
  packets are never dropped) and redraw their counter; a successful
  station redraws at stage zero if its queue holds another packet and goes
  idle otherwise.  Idle stations draw a stage-zero counter on the next
  packet arrival.  Counters freeze during busy slots.
* Arrivals are Poisson per station and ingested at slot boundaries.  The
  queue (head packet included) holds at most ``queue_capacity`` packets;
  arrivals beyond that are dropped.  Thanks to memorylessness the next
  arrival is only sampled while the queue has room, so offered load beyond
  the queue costs nothing.

Randomness: one Philox4x64 counter stream per station, keyed by
``(master_seed, station_index)``.  Each station consumes its stream as
uniforms, in event order: interarrival draws (-log(1-u)/lambda), backoff
draws (floor(u * W_i)), and one outcome draw per sole transmission.
Identical (scenario, duration, seed, capacity) inputs therefore reproduce
the event sequence bit for bit within this implementation.

The first ``warmup_fraction`` of virtual time is excluded from every
counter to reduce transient bias; reported throughput divides delivered
bits by the measured window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import phy, timing
from .params import Scenario

_IDLE = 0
_ACTIVE = 1

_BLOCK = 4096


class _UniformStream:
    """Buffered uniform draws from a per-station Philox substream."""

    __slots__ = ("_gen", "_buf", "_idx")

    def __init__(self, master_seed: int, stream_id: int):
        key = np.array(
            [master_seed & 0xFFFFFFFFFFFFFFFF, stream_id], dtype=np.uint64
        )
        self._gen = np.random.Generator(np.random.Philox(key=key))
        self._buf: list[float] = []
        self._idx = 0

    def next(self) -> float:
        if self._idx >= len(self._buf):
            self._buf = self._gen.random(_BLOCK).tolist()
            self._idx = 0
        v = self._buf[self._idx]
        self._idx += 1
        return v


@dataclass(frozen=True)
class SimReport:
    """Counters of one simulation run, warm-up excluded."""

    seed: int
    duration_s: float
    warmup_s: float
    virtual_time_s: float  # measured window: duration minus warm-up
    slots_observed: int
    attempts: tuple[int, ...]
    successes: tuple[int, ...]
    collisions: tuple[int, ...]
    channel_error_losses: tuple[int, ...]
    delivered_payload_bits: tuple[int, ...]
    per_station_throughput_bps: tuple[float, ...]
    aggregate_throughput_bps: float
    tau_estimate: tuple[float, ...]


@dataclass(frozen=True)
class BatchReport:
    """Independent replications of one scenario, merged in seed order."""

    reports: tuple[SimReport, ...]
    aggregate_mean_bps: float
    aggregate_std_bps: float
    per_station_mean_bps: tuple[float, ...]


def run(
    scn: Scenario,
    duration_s: float,
    seed: int,
    queue_capacity: int = 2,
    warmup_fraction: float = 0.05,
) -> SimReport:
    """Simulate one seeded run of the scenario for ``duration_s`` of virtual time."""
    n = scn.n_stations
    if duration_s <= 0:
        zeros = (0,) * n
        return SimReport(
            seed=seed,
            duration_s=max(duration_s, 0.0),
            warmup_s=0.0,
            virtual_time_s=0.0,
            slots_observed=0,
            attempts=zeros,
            successes=zeros,
            collisions=zeros,
            channel_error_losses=zeros,
            delivered_payload_bits=zeros,
            per_station_throughput_bps=(0.0,) * n,
            aggregate_throughput_bps=0.0,
            tau_estimate=(0.0,) * n,
        )
    if queue_capacity < 1:
        raise ValueError("queue_capacity must be >= 1")

    params = scn.params
    sigma = params.slot_s
    w0, m_stages = params.w0, params.backoff_stages
    windows = [(1 << i) * w0 for i in range(m_stages + 1)]

    p_err = phy.scenario_error_rates(scn)
    lam = [st.lambda_pkt_s for st in scn.stations]
    saturated = [st.saturated for st in scn.stations]
    payload_bits = [8 * scn.payload_bytes(s) for s in range(n)]
    t_success = [
        timing.success_duration(params, scn.stations[s].spec.data_rate, scn.payload_bytes(s))
        for s in range(n)
    ]
    t_collision = [
        timing.collision_duration(params, scn.stations[s].spec.data_rate, scn.payload_bytes(s))
        for s in range(n)
    ]

    streams = [_UniformStream(seed, s) for s in range(n)]

    state = [_ACTIVE if saturated[s] else _IDLE for s in range(n)]
    stage = [0] * n
    counter = [0] * n
    queue: list[list[float]] = [[] for _ in range(n)]  # arrival timestamps, head in service
    next_arrival = [math.inf] * n

    for s in range(n):
        if saturated[s]:
            counter[s] = int(streams[s].next() * w0)
        elif lam[s] > 0.0:
            next_arrival[s] = -math.log(1.0 - streams[s].next()) / lam[s]

    warmup_t = warmup_fraction * duration_s
    attempts = [0] * n
    successes = [0] * n
    collisions = [0] * n
    error_losses = [0] * n
    slots_observed = 0

    unsaturated = [s for s in range(n) if not saturated[s] and lam[s] > 0.0]

    def ingest_arrivals(now: float) -> None:
        # accept every arrival due by `now`; idle stations join contention
        for s in unsaturated:
            while next_arrival[s] <= now:
                at = next_arrival[s]
                queue[s].append(at)
                if len(queue[s]) >= queue_capacity:
                    next_arrival[s] = math.inf  # resampled when space frees
                else:
                    next_arrival[s] = at - math.log(1.0 - streams[s].next()) / lam[s]
                if state[s] == _IDLE:
                    state[s] = _ACTIVE
                    stage[s] = 0
                    counter[s] = int(streams[s].next() * w0)

    t = 0.0
    while t < duration_s:
        ingest_arrivals(t)

        transmitters = [
            s for s in range(n) if state[s] == _ACTIVE and counter[s] == 0
        ]
        in_window = t >= warmup_t

        if transmitters:
            if in_window:
                slots_observed += 1
                for s in transmitters:
                    attempts[s] += 1
            if len(transmitters) == 1:
                s = transmitters[0]
                failed = streams[s].next() < p_err[s]
                busy = t_collision[s] if failed else t_success[s]
                t_next = t + busy
                ingest_arrivals(t_next)  # arrivals land before the outcome settles
                if failed:
                    if in_window:
                        error_losses[s] += 1
                    stage[s] = min(stage[s] + 1, m_stages)
                    counter[s] = int(streams[s].next() * windows[stage[s]])
                else:
                    if in_window:
                        successes[s] += 1
                    if saturated[s]:
                        stage[s] = 0
                        counter[s] = int(streams[s].next() * w0)
                    else:
                        queue[s].pop(0)
                        if queue[s]:
                            stage[s] = 0
                            counter[s] = int(streams[s].next() * w0)
                        else:
                            state[s] = _IDLE
                        if next_arrival[s] == math.inf and lam[s] > 0.0:
                            next_arrival[s] = (
                                t_next - math.log(1.0 - streams[s].next()) / lam[s]
                            )
            else:
                busy = max(t_collision[s] for s in transmitters)
                t_next = t + busy
                ingest_arrivals(t_next)
                for s in transmitters:
                    if in_window:
                        collisions[s] += 1
                    stage[s] = min(stage[s] + 1, m_stages)
                    counter[s] = int(streams[s].next() * windows[stage[s]])
            t = t_next
        else:
            # nothing due this slot: batch-advance to the next possible event
            jump = math.ceil((duration_s - t) / sigma)
            for s in range(n):
                if state[s] == _ACTIVE and counter[s] < jump:
                    jump = counter[s]
            for s in unsaturated:
                na = next_arrival[s]
                if na < math.inf:
                    k = math.ceil((na - t) / sigma)
                    if k < jump:
                        jump = k
            jump = max(jump, 1)
            if in_window:
                slots_observed += jump
            elif t + jump * sigma > warmup_t:
                slots_observed += jump - math.ceil((warmup_t - t) / sigma)
            for s in range(n):
                if state[s] == _ACTIVE:
                    counter[s] -= jump
            t += jump * sigma

    window = duration_s - warmup_t
    delivered = tuple(successes[s] * payload_bits[s] for s in range(n))
    per_station_bps = tuple(d / window for d in delivered)
    tau_est = tuple(
        attempts[s] / slots_observed if slots_observed else 0.0 for s in range(n)
    )
    return SimReport(
        seed=seed,
        duration_s=duration_s,
        warmup_s=warmup_t,
        virtual_time_s=window,
        slots_observed=slots_observed,
        attempts=tuple(attempts),
        successes=tuple(successes),
        collisions=tuple(collisions),
        channel_error_losses=tuple(error_losses),
        delivered_payload_bits=delivered,
        per_station_throughput_bps=per_station_bps,
        aggregate_throughput_bps=sum(per_station_bps),
        tau_estimate=tau_est,
    )


def batch(
    scn: Scenario,
    duration_s: float,
    seeds: Sequence[int],
    queue_capacity: int = 2,
    warmup_fraction: float = 0.05,
) -> BatchReport:
    """Independent replications, one per seed, merged in seed order."""
    if not seeds:
        raise ValueError("at least one seed is required")
    reports = tuple(
        run(scn, duration_s, seed, queue_capacity, warmup_fraction) for seed in seeds
    )
    aggs = [r.aggregate_throughput_bps for r in reports]
    mean = sum(aggs) / len(aggs)
    if len(aggs) > 1:
        var = sum((a - mean) ** 2 for a in aggs) / (len(aggs) - 1)
        std = math.sqrt(var)
    else:
        std = 0.0
    n = scn.n_stations
    per_station_mean = tuple(
        sum(r.per_station_throughput_bps[s] for r in reports) / len(reports)
        for s in range(n)
    )
    return BatchReport(
        reports=reports,
        aggregate_mean_bps=mean,
        aggregate_std_bps=std,
        per_station_mean_bps=per_station_mean,
    )
