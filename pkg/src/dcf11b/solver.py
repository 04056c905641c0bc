"""Coupled operating-point solver and throughput models for the cell.

For N stations the unknowns are the per-station transmission, collision and
queue-occupancy probabilities plus the expected slot time.  They are coupled
through the backoff chain, the slot-time decomposition, and the traffic
closure q = 1 - exp(-lambda * t_av), and are solved here by damped
successive substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from . import markov, phy, timing
from .params import NetworkParams, RateClassSpec, Scenario
from .timing import SlotBreakdown


class ConvergenceError(RuntimeError):
    """Fixed-point iteration failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NumericalError(RuntimeError):
    """An iterate left the feasible region (NaN or out-of-range value)."""


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iters: int = 10_000
    damping: float = 0.5
    max_damping_halvings: int = 4


@dataclass(frozen=True)
class OperatingPoint:
    """Converged per-station probabilities plus the slot-time decomposition."""

    tau: tuple[float, ...]
    p_col: tuple[float, ...]
    p_eq: tuple[float, ...]
    p_err: tuple[float, ...]
    q: tuple[float, ...]
    t_av: float
    breakdown: SlotBreakdown
    residual: float
    iterations: int


@dataclass(frozen=True)
class ThroughputReport:
    aggregate_bps: float
    per_station_bps: tuple[float, ...]
    linear_model_bps: float
    in_region_d: bool


def _collision_probs(tau: Sequence[float]) -> list[float]:
    # one pass over the complement products; numerically fine at these sizes
    n = len(tau)
    return [
        1.0 - math.prod(1.0 - tau[j] for j in range(n) if j != s) for s in range(n)
    ]


def solve_operating_point(
    scn: Scenario,
    opts: SolverOptions = SolverOptions(),
    p_err: Sequence[float] | None = None,
) -> OperatingPoint:
    """Solve the coupled per-station system by damped successive substitution.

    Starts at the ideal saturated point (tau = 2/(W0+1), expected slot =
    the empty-slot time), damps each update, and halves the damping factor
    when the residual grows.  Convergence requires both the iterate step
    and the re-evaluation residual to fall below ``opts.tol`` in sup norm.
    """
    n = scn.n_stations
    params = scn.params
    if p_err is None:
        p_err = phy.scenario_error_rates(scn)
    p_err = [float(p) for p in p_err]
    if len(p_err) != n:
        raise ValueError("p_err must have one entry per station")

    lam = [st.lambda_pkt_s for st in scn.stations]
    w0, m = params.w0, params.backoff_stages

    tau = [2.0 / (w0 + 1.0)] * n
    p_col = _collision_probs(tau)
    q = [1.0 if math.isinf(l) else 0.0 for l in lam]
    t_av = params.slot_s

    beta = opts.damping
    halvings = 0
    prev_residual = math.inf
    residual = math.inf

    for iteration in range(1, opts.max_iters + 1):
        p_col_new = _collision_probs(tau)
        p_eq = [markov.equivalent_failure_prob(pc, pe) for pc, pe in zip(p_col_new, p_err)]
        q_new = [
            1.0 if math.isinf(l) else markov.queue_nonempty_prob(l, t_av) for l in lam
        ]
        tau_new = [
            markov.transmit_prob_small_queue(qs, w0, m, pe) for qs, pe in zip(q_new, p_eq)
        ]
        t_av_new = timing.slot_breakdown(scn, tau_new, p_err).t_av

        residual = max(
            max(abs(a - b) for a, b in zip(tau_new, tau)),
            max(abs(a - b) for a, b in zip(p_col_new, p_col)),
            max(abs(a - b) for a, b in zip(q_new, q)),
            abs(t_av_new - t_av),
        )
        if not math.isfinite(residual):
            raise NumericalError(f"non-finite iterate at iteration {iteration}")
        if any(not 0.0 <= t <= 1.0 for t in tau_new):
            raise NumericalError(f"transmission probability left [0, 1] at iteration {iteration}")

        if residual > prev_residual and halvings < opts.max_damping_halvings:
            beta *= 0.5
            halvings += 1
        prev_residual = residual

        step = 0.0
        for s in range(n):
            upd = (1.0 - beta) * tau[s] + beta * tau_new[s]
            step = max(step, abs(upd - tau[s]))
            tau[s] = upd
            upd = (1.0 - beta) * p_col[s] + beta * p_col_new[s]
            step = max(step, abs(upd - p_col[s]))
            p_col[s] = upd
            upd = (1.0 - beta) * q[s] + beta * q_new[s]
            step = max(step, abs(upd - q[s]))
            q[s] = upd
        upd = (1.0 - beta) * t_av + beta * t_av_new
        step = max(step, abs(upd - t_av))
        t_av = upd

        if residual <= opts.tol and step <= opts.tol:
            # report the undamped image: exact fixed points (e.g. a silent
            # cell) then come out exact instead of carrying damping residue
            tau, p_col, q, t_av = tau_new, p_col_new, q_new, t_av_new
            break
    else:
        raise ConvergenceError(
            f"no fixed point within {opts.max_iters} iterations "
            f"(last residual {residual:.3e})",
            residual=residual,
            iterations=opts.max_iters,
        )

    p_col = _collision_probs(tau)
    p_eq = [markov.equivalent_failure_prob(pc, pe) for pc, pe in zip(p_col, p_err)]
    breakdown = timing.slot_breakdown(scn, tau, p_err)
    return OperatingPoint(
        tau=tuple(tau),
        p_col=tuple(p_col),
        p_eq=tuple(p_eq),
        p_err=tuple(p_err),
        q=tuple(q),
        t_av=breakdown.t_av,
        breakdown=breakdown,
        residual=residual,
        iterations=iteration,
    )


def aggregate_throughput(op: OperatingPoint, scn: Scenario) -> ThroughputReport:
    """Payload bits delivered per second at the operating point."""
    per_station = tuple(
        op.breakdown.p_success[s]
        * (1.0 - op.p_err[s])
        * 8.0
        * scn.payload_bytes(s)
        / op.t_av
        for s in range(scn.n_stations)
    )
    lam = [st.lambda_pkt_s for st in scn.stations]
    lam_c = [
        critical_rate(scn.stations[s].spec, scn.params, scn.payload_bytes(s))
        for s in range(scn.n_stations)
    ]
    return ThroughputReport(
        aggregate_bps=sum(per_station),
        per_station_bps=per_station,
        linear_model_bps=linear_model(scn),
        in_region_d=in_region_d(lam, lam_c),
    )


def linear_model(scn: Scenario) -> float:
    """Low-load throughput model: each station contributes payload * rate."""
    return sum(
        8.0 * scn.payload_bytes(s) * scn.stations[s].lambda_pkt_s
        for s in range(scn.n_stations)
    )


def critical_rate(
    spec: RateClassSpec, params: NetworkParams, payload_bytes: int
) -> float:
    """Packet rate above which a station drifts into saturation.

    Inverse of the light-traffic service time: half the minimum contention
    window of empty slots plus one successful exchange.
    """
    t_access = 0.5 * params.w0 * params.slot_s
    t_tx = timing.success_duration(params, spec.data_rate, payload_bytes)
    return 1.0 / (t_access + t_tx)


def in_region_d(lam: Sequence[float], lam_c: Sequence[float]) -> bool:
    """Whether a rate vector lies in the linear-model validity region.

    The first N-1 rates must stay strictly below half their critical rate
    and the normalised rates must sum to at most one half (the hyperplane
    through the half-critical axis points, which is included).
    """
    if len(lam) != len(lam_c):
        raise ValueError("lam and lam_c must have equal length")
    if any(l < 0 for l in lam):
        return False
    if any(l >= 0.5 * lc for l, lc in zip(lam[:-1], lam_c[:-1])):
        return False
    return sum(l / lc for l, lc in zip(lam, lam_c)) <= 0.5


def sweep(
    scn: Scenario,
    axis: int | str,
    grid: Sequence[float],
    opts: SolverOptions = SolverOptions(),
) -> list[tuple[float, ThroughputReport]]:
    """Throughput along a packet-rate grid.

    ``axis`` selects the station index whose rate varies, or ``"all"`` to
    move every station together.  Grid points are solved independently and
    reported in grid order.
    """
    results = []
    for lam in grid:
        if axis == "all":
            stations = [replace(st, lambda_pkt_s=lam) for st in scn.stations]
        else:
            stations = list(scn.stations)
            stations[axis] = replace(stations[axis], lambda_pkt_s=lam)
        point_scn = scn.with_stations(stations)
        op = solve_operating_point(point_scn, opts)
        results.append((lam, aggregate_throughput(op, point_scn)))
    return results

