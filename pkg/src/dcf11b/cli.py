"""Batch command-line front-end.

Verbs: ``solve``, ``sweep``, ``sim``, ``critical-rates``, ``phy-curves``.
Scenarios come from a file path or one of the built-in preset names
(``scenario1``, ``scenario2``, ``scenario3``); ``--dump-defaults`` writes a
fully keyed default scenario file instead of running a verb.

Exit codes: 0 success, 2 scenario/argument parse error, 3 solver
divergence, 4 unsupported PHY combination.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import phy, presets, sim, solver
from .params import ChannelModel, DistanceChannel, Modulation, RATE_CLASSES
from .phy import UnsupportedModulationError
from .scenario_io import (
    ScenarioBundle,
    ScenarioFormatError,
    default_bundle,
    dump_scenario_text,
    parse_scenario_file,
)
from .solver import ConvergenceError


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_bundle(name: str) -> ScenarioBundle:
    if os.path.exists(name):
        return parse_scenario_file(name)
    if name in presets.PRESETS:
        return presets.PRESETS[name]()
    raise ScenarioFormatError(
        f"'{name}' is neither a scenario file nor one of the presets "
        f"{sorted(presets.PRESETS)}"
    )


def _cmd_solve(args) -> None:
    bundle = _load_bundle(args.scenario)
    scn = bundle.scenario
    op = solver.solve_operating_point(scn, bundle.solver)
    rep = solver.aggregate_throughput(op, scn)
    lines = [
        "station,rate_class,data_rate_bps,lambda_pkt_s,payload_bytes,p_err,q,tau,p_col,p_eq,throughput_bps"
    ]
    for s, st in enumerate(scn.stations):
        lam = "saturated" if st.saturated else _fmt(st.lambda_pkt_s)
        lines.append(
            ",".join(
                [
                    str(s + 1),
                    str(st.rate_class),
                    _fmt(st.spec.data_rate),
                    lam,
                    str(scn.payload_bytes(s)),
                    _fmt(op.p_err[s]),
                    _fmt(op.q[s]),
                    _fmt(op.tau[s]),
                    _fmt(op.p_col[s]),
                    _fmt(op.p_eq[s]),
                    _fmt(rep.per_station_bps[s]),
                ]
            )
        )
    bd = op.breakdown
    lines += [
        "",
        "quantity,value",
        f"aggregate_bps,{_fmt(rep.aggregate_bps)}",
        f"linear_model_bps,{_fmt(rep.linear_model_bps)}",
        f"in_region_d,{str(rep.in_region_d).lower()}",
        f"t_av_s,{_fmt(op.t_av)}",
        f"t_idle_s,{_fmt(bd.t_idle)}",
        f"t_success_s,{_fmt(bd.t_success)}",
        f"t_collision_s,{_fmt(bd.t_collision)}",
        f"t_error_s,{_fmt(bd.t_error)}",
        f"residual,{_fmt(op.residual)}",
        f"iterations,{op.iterations}",
    ]
    _emit(lines, args.out)


def _grid(args) -> list[float]:
    if args.steps < 1:
        raise ScenarioFormatError("--steps must be >= 1")
    if args.steps == 1:
        return [float(args.from_)]
    return [float(x) for x in np.linspace(args.from_, args.to, args.steps)]


def _cmd_sweep(args) -> None:
    bundle = _load_bundle(args.scenario)
    scn = bundle.scenario
    n = scn.n_stations
    axis_kind, _, axis_arg = args.axis.partition(":")
    grid = _grid(args)

    if axis_kind == "lambda":
        axis = "all" if axis_arg == "all" else _station_index(axis_arg, n)
        results = solver.sweep(scn, axis, grid, bundle.solver)
        header = ["lambda_pkt_s"]
        header += [f"s{i + 1}_bps" for i in range(n)]
        header += ["aggregate_bps", "linear_model_bps", "in_region_d"]
        lines = [",".join(header)]
        for lam, rep in results:
            row = [_fmt(float(lam))]
            row += [_fmt(v) for v in rep.per_station_bps]
            row += [
                _fmt(rep.aggregate_bps),
                _fmt(rep.linear_model_bps),
                str(rep.in_region_d).lower(),
            ]
            lines.append(",".join(row))
    elif axis_kind == "distance":
        mover = _station_index(axis_arg, n)
        st = scn.stations[mover]
        if not isinstance(st.channel, DistanceChannel):
            raise ScenarioFormatError(
                f"station {mover + 1} has no distance channel to sweep"
            )
        prop, model = st.channel.propagation, st.channel.model
        header = ["distance_m"]
        header += [f"s{i + 1}_bps" for i in range(n)]
        header += ["aggregate_bps", "mover_rate_class", "mover_per"]
        lines = [",".join(header)]
        for d in grid:
            rate_class = presets.best_rate_class(
                d, prop, scn.params, scn.payload_bytes(mover), channel=model
            )
            stations = list(scn.stations)
            stations[mover] = replace(
                st, rate_class=rate_class, channel=DistanceChannel(d, prop, model)
            )
            point = scn.with_stations(stations)
            op = solver.solve_operating_point(point, bundle.solver)
            rep = solver.aggregate_throughput(op, point)
            row = [_fmt(float(d))]
            row += [_fmt(v) for v in rep.per_station_bps]
            row += [_fmt(rep.aggregate_bps), str(rate_class), _fmt(op.p_err[mover])]
            lines.append(",".join(row))
    else:
        raise ScenarioFormatError(
            f"--axis must be lambda:all, lambda:<station> or distance:<station>, got {args.axis!r}"
        )
    _emit(lines, args.out)


def _station_index(token: str, n: int) -> int:
    try:
        idx = int(token) - 1
    except ValueError:
        raise ScenarioFormatError(f"bad station index {token!r}") from None
    if not 0 <= idx < n:
        raise ScenarioFormatError(f"station index {token} out of range 1..{n}")
    return idx


def _cmd_sim(args) -> None:
    bundle = _load_bundle(args.scenario)
    scn = bundle.scenario
    opts = bundle.sim
    seeds = tuple(args.seeds) if args.seeds else opts.seeds
    duration = args.duration if args.duration is not None else opts.duration_s

    op = solver.solve_operating_point(scn, bundle.solver)
    model = solver.aggregate_throughput(op, scn)
    rep = sim.batch(scn, duration, seeds, opts.queue_capacity, opts.warmup_fraction)

    k = len(seeds)
    lines = [
        "station,attempts,successes,collisions,channel_error_losses,"
        "sim_bps,model_bps,deviation"
    ]
    for s in range(scn.n_stations):
        att = sum(r.attempts[s] for r in rep.reports) / k
        suc = sum(r.successes[s] for r in rep.reports) / k
        col = sum(r.collisions[s] for r in rep.reports) / k
        err = sum(r.channel_error_losses[s] for r in rep.reports) / k
        sim_bps = rep.per_station_mean_bps[s]
        model_bps = model.per_station_bps[s]
        dev = (sim_bps - model_bps) / model_bps if model_bps else math.nan
        lines.append(
            ",".join(
                [
                    str(s + 1),
                    _fmt(att),
                    _fmt(suc),
                    _fmt(col),
                    _fmt(err),
                    _fmt(sim_bps),
                    _fmt(model_bps),
                    _fmt(dev),
                ]
            )
        )
    agg_dev = (
        (rep.aggregate_mean_bps - model.aggregate_bps) / model.aggregate_bps
        if model.aggregate_bps
        else math.nan
    )
    lines.append(
        ",".join(
            [
                "aggregate",
                "",
                "",
                "",
                "",
                _fmt(rep.aggregate_mean_bps),
                _fmt(model.aggregate_bps),
                _fmt(agg_dev),
            ]
        )
    )
    _emit(lines, args.out)


def _cmd_critical_rates(args) -> None:
    bundle = _load_bundle(args.scenario)
    params = bundle.scenario.params
    lines = ["rate_class,data_rate_bps,payload_bytes,lambda_c_pkt_s"]
    for r in sorted(RATE_CLASSES):
        spec = RATE_CLASSES[r]
        lam_c = solver.critical_rate(spec, params, params.payload_bytes)
        lines.append(
            f"{r},{_fmt(spec.data_rate)},{params.payload_bytes},{_fmt(lam_c)}"
        )
    _emit(lines, args.out)


def _cmd_phy_curves(args) -> None:
    bundle = _load_bundle(args.scenario)
    params = bundle.scenario.params
    spec = RATE_CLASSES[args.rate_class]
    channel = ChannelModel(args.channel)
    layout = params.layout_for(None)
    basic = params.basic_modulation
    basic_spec = RATE_CLASSES[1 if basic is Modulation.DBPSK else 2]
    grid = _grid(args)

    if args.axis == "snr":
        lines = ["snr_db,ber,fer"]
        for snr_db in grid:
            gamma_data = phy.db_to_linear(phy.snr_per_bit_db(snr_db, spec))
            gamma_basic = phy.db_to_linear(phy.snr_per_bit_db(snr_db, basic_spec))
            b = phy.ber(gamma_data, spec.modulation, channel)
            f = phy.frame_error_rate(
                layout, spec, basic, gamma_basic, gamma_data, channel
            )
            lines.append(f"{_fmt(float(snr_db))},{_fmt(b)},{_fmt(f)}")
    elif args.axis == "distance":
        prop = presets.SCENARIO3_PROPAGATION
        for st in bundle.scenario.stations:
            if isinstance(st.channel, DistanceChannel):
                prop = st.channel.propagation
                break
        lines = ["distance_m,snr_db,ber,fer"]
        for d in grid:
            snr_db = phy.received_snr_db(d, prop)
            gamma_data = phy.db_to_linear(phy.snr_per_bit_db(snr_db, spec))
            b = phy.ber(gamma_data, spec.modulation, channel)
            f = phy.per_at_distance(d, prop, spec, layout, channel, basic)
            lines.append(f"{_fmt(float(d))},{_fmt(snr_db)},{_fmt(b)},{_fmt(f)}")
    else:
        raise ScenarioFormatError(f"--axis must be 'snr' or 'distance', got {args.axis!r}")
    _emit(lines, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcf11b",
        description="802.11b DCF throughput model and simulator",
    )
    parser.add_argument(
        "--dump-defaults",
        action="store_true",
        help="write a fully keyed default scenario file and exit",
    )
    parser.add_argument("--out", help="output path (default: stdout)")
    sub = parser.add_subparsers(dest="command")

    def add_scenario(p):
        p.add_argument(
            "--scenario",
            required=True,
            help="scenario file path or preset name (scenario1|scenario2|scenario3)",
        )
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("solve", help="solve the operating point and throughput")
    add_scenario(p)

    p = sub.add_parser("sweep", help="throughput along a packet-rate or distance grid")
    add_scenario(p)
    p.add_argument("--axis", required=True, help="lambda:all | lambda:<station> | distance:<station>")
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("sim", help="simulate and compare against the model")
    add_scenario(p)
    p.add_argument("--seeds", type=int, nargs="+", help="override the scenario seed list")
    p.add_argument("--duration", type=float, help="virtual seconds per replication")

    p = sub.add_parser("critical-rates", help="critical packet rate per rate class")
    add_scenario(p)

    p = sub.add_parser("phy-curves", help="BER/FER curves over SNR or distance")
    add_scenario(p)
    p.add_argument("--rate-class", type=int, choices=sorted(RATE_CLASSES), required=True)
    p.add_argument("--channel", choices=[c.value for c in ChannelModel], required=True)
    p.add_argument("--axis", default="snr", help="snr (default) or distance")
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    return parser


_COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "sim": _cmd_sim,
    "critical-rates": _cmd_critical_rates,
    "phy-curves": _cmd_phy_curves,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.dump_defaults:
            _emit(dump_scenario_text(default_bundle()).splitlines(), args.out)
            return 0
        if args.command is None:
            parser.print_help()
            return 2
        _COMMANDS[args.command](args)
        return 0
    except ScenarioFormatError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"solver divergence: {exc}", file=sys.stderr)
        return 3
    except UnsupportedModulationError as exc:
        print(f"unsupported PHY combination: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
