"""Scenario files: an INI dialect with one section per station.

Sections and keys (all [network], [solver], [sim] and [propagation] keys are
optional and default to the standard 802.11b cell below; stations are
numbered [station.1], [station.2], ... without gaps):

* ``[network]`` MAC/PHY constants, base SI units embedded in key names
  (``slot_s``, ``basic_rate_bps``, ``ack_bytes``, ``w0``, ...).
* ``[solver]`` ``tol``, ``max_iters``, ``damping``.
* ``[sim]`` ``duration_s``, ``seeds`` (space separated), ``queue_capacity``,
  ``warmup_fraction``.
* ``[propagation]`` link-budget parameters plus ``channel_model``
  (``rayleigh`` or ``awgn``); used by stations with a distance channel.
* ``[station.N]`` ``rate_class`` (1..4), ``lambda_pkt_s`` (float or
  ``saturated``), optional ``payload_bytes``, and ``channel``: ``ideal``,
  ``per:<float>`` or ``distance:<metres>``.

Unknown sections or keys are rejected with the offending line number.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .params import (
    ChannelModel,
    DistanceChannel,
    FixedPer,
    IdealChannel,
    NetworkParams,
    PropagationParams,
    Scenario,
    StationConfig,
)
from .solver import SolverOptions


class ScenarioFormatError(ValueError):
    """A scenario file failed to parse or validate."""


@dataclass(frozen=True)
class SimOptions:
    duration_s: float = 100.0
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    queue_capacity: int = 2
    warmup_fraction: float = 0.05


@dataclass(frozen=True)
class ScenarioBundle:
    """Everything a batch run needs: the cell plus solver and sim settings."""

    scenario: Scenario
    solver: SolverOptions = field(default_factory=SolverOptions)
    sim: SimOptions = field(default_factory=SimOptions)


_NETWORK_FIELDS = {f.name: f.type for f in fields(NetworkParams)}
_PROP_FIELDS = {f.name: f.type for f in fields(PropagationParams)}
_SOLVER_KEYS = {"tol": float, "max_iters": int, "damping": float}
_SIM_KEYS = {
    "duration_s": float,
    "seeds": str,
    "queue_capacity": int,
    "warmup_fraction": float,
}
_STATION_KEYS = {"rate_class", "lambda_pkt_s", "payload_bytes", "channel"}
_INT_NETWORK_KEYS = {
    "ack_bytes",
    "mac_header_bytes",
    "plcp_preamble_bits",
    "plcp_header_bits",
    "w0",
    "backoff_stages",
    "payload_bytes",
}


def _line_of(text: str, section: str, key: str | None = None) -> int:
    """Best-effort line number of a section or key, for error messages."""
    in_section = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            if key is None and line == f"[{section}]":
                return lineno
            in_section = line == f"[{section}]"
        elif key is not None and in_section:
            name = line.split("=", 1)[0].strip()
            if name == key:
                return lineno
    return 0


def _fail(text: str, section: str, key: str | None, message: str) -> None:
    lineno = _line_of(text, section, key)
    where = f"line {lineno}: " if lineno else ""
    raise ScenarioFormatError(f"{where}{message}")


def parse_scenario_text(text: str) -> ScenarioBundle:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioFormatError(str(exc)) from exc

    known = {"network", "solver", "sim", "propagation"}
    station_sections = []
    for section in cp.sections():
        if section in known:
            continue
        if section.startswith("station."):
            station_sections.append(section)
        else:
            _fail(text, section, None, f"unknown section [{section}]")

    network_kwargs = {}
    if cp.has_section("network"):
        for key, value in cp.items("network"):
            if key not in _NETWORK_FIELDS:
                _fail(text, "network", key, f"unknown [network] key '{key}'")
            try:
                network_kwargs[key] = (
                    int(value) if key in _INT_NETWORK_KEYS else float(value)
                )
            except ValueError:
                _fail(text, "network", key, f"bad value for '{key}': {value!r}")
    try:
        params = NetworkParams(**network_kwargs)
    except ValueError as exc:
        raise ScenarioFormatError(f"[network]: {exc}") from exc

    solver_kwargs = {}
    if cp.has_section("solver"):
        for key, value in cp.items("solver"):
            if key not in _SOLVER_KEYS:
                _fail(text, "solver", key, f"unknown [solver] key '{key}'")
            try:
                solver_kwargs[key] = _SOLVER_KEYS[key](value)
            except ValueError:
                _fail(text, "solver", key, f"bad value for '{key}': {value!r}")
    solver_opts = SolverOptions(**solver_kwargs)

    sim_kwargs = {}
    if cp.has_section("sim"):
        for key, value in cp.items("sim"):
            if key not in _SIM_KEYS:
                _fail(text, "sim", key, f"unknown [sim] key '{key}'")
            if key == "seeds":
                try:
                    sim_kwargs["seeds"] = tuple(
                        int(tok) for tok in value.replace(",", " ").split()
                    )
                except ValueError:
                    _fail(text, "sim", key, f"bad seed list: {value!r}")
            else:
                try:
                    sim_kwargs[key] = _SIM_KEYS[key](value)
                except ValueError:
                    _fail(text, "sim", key, f"bad value for '{key}': {value!r}")
    sim_opts = SimOptions(**sim_kwargs)

    prop_kwargs = {}
    channel_model = ChannelModel.RAYLEIGH
    if cp.has_section("propagation"):
        for key, value in cp.items("propagation"):
            if key == "channel_model":
                try:
                    channel_model = ChannelModel(value.strip().lower())
                except ValueError:
                    _fail(
                        text, "propagation", key,
                        f"channel_model must be 'awgn' or 'rayleigh', got {value!r}",
                    )
            elif key in _PROP_FIELDS:
                try:
                    prop_kwargs[key] = float(value)
                except ValueError:
                    _fail(text, "propagation", key, f"bad value for '{key}': {value!r}")
            else:
                _fail(text, "propagation", key, f"unknown [propagation] key '{key}'")
    try:
        propagation = PropagationParams(**prop_kwargs)
    except ValueError as exc:
        raise ScenarioFormatError(f"[propagation]: {exc}") from exc

    if not station_sections:
        raise ScenarioFormatError("a scenario needs at least one [station.N] section")
    expected = [f"station.{i}" for i in range(1, len(station_sections) + 1)]
    if set(station_sections) != set(expected):
        raise ScenarioFormatError(
            "station sections must be numbered [station.1] .. [station.N] without gaps"
        )

    stations = []
    for name in expected:
        kwargs: dict = {}
        for key, value in cp.items(name):
            if key not in _STATION_KEYS:
                _fail(text, name, key, f"unknown [{name}] key '{key}'")
        if not cp.has_option(name, "rate_class"):
            _fail(text, name, None, f"[{name}] needs a rate_class")
        try:
            kwargs["rate_class"] = int(cp.get(name, "rate_class"))
        except ValueError:
            _fail(text, name, "rate_class", "rate_class must be an integer 1..4")
        lam_text = cp.get(name, "lambda_pkt_s", fallback="saturated").strip().lower()
        if lam_text in ("saturated", "inf"):
            kwargs["lambda_pkt_s"] = math.inf
        else:
            try:
                kwargs["lambda_pkt_s"] = float(lam_text)
            except ValueError:
                _fail(
                    text, name, "lambda_pkt_s",
                    f"lambda_pkt_s must be a rate or 'saturated', got {lam_text!r}",
                )
        if cp.has_option(name, "payload_bytes"):
            try:
                kwargs["payload_bytes"] = int(cp.get(name, "payload_bytes"))
            except ValueError:
                _fail(text, name, "payload_bytes", "payload_bytes must be an integer")
        ch_text = cp.get(name, "channel", fallback="ideal").strip().lower()
        if ch_text == "ideal":
            kwargs["channel"] = IdealChannel()
        elif ch_text.startswith("per:"):
            try:
                kwargs["channel"] = FixedPer(float(ch_text[4:]))
            except ValueError as exc:
                _fail(text, name, "channel", f"bad channel spec: {exc}")
        elif ch_text.startswith("distance:"):
            try:
                d = float(ch_text[9:])
            except ValueError:
                _fail(text, name, "channel", f"bad distance in channel spec {ch_text!r}")
            kwargs["channel"] = DistanceChannel(d, propagation, channel_model)
        else:
            _fail(
                text, name, "channel",
                f"channel must be 'ideal', 'per:<float>' or 'distance:<m>', got {ch_text!r}",
            )
        try:
            stations.append(StationConfig(**kwargs))
        except ValueError as exc:
            raise ScenarioFormatError(f"[{name}]: {exc}") from exc

    return ScenarioBundle(Scenario(tuple(stations), params), solver_opts, sim_opts)


def parse_scenario_file(path: str | Path) -> ScenarioBundle:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario_text(text)


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_scenario_text(bundle: ScenarioBundle) -> str:
    """Canonical file image of a bundle; parsing it back is the identity.

    The format carries one [propagation] block, so every distance-channel
    station shares the first one found (which is all a parsed file can
    express anyway).
    """
    scn, params = bundle.scenario, bundle.scenario.params
    lines = ["[network]"]
    for f in fields(NetworkParams):
        lines.append(f"{f.name} = {_format_value(getattr(params, f.name))}")
    lines += [
        "",
        "[solver]",
        f"tol = {_format_value(bundle.solver.tol)}",
        f"max_iters = {bundle.solver.max_iters}",
        f"damping = {_format_value(bundle.solver.damping)}",
        "",
        "[sim]",
        f"duration_s = {_format_value(bundle.sim.duration_s)}",
        f"seeds = {' '.join(str(s) for s in bundle.sim.seeds)}",
        f"queue_capacity = {bundle.sim.queue_capacity}",
        f"warmup_fraction = {_format_value(bundle.sim.warmup_fraction)}",
    ]

    prop = None
    model = ChannelModel.RAYLEIGH
    for st in scn.stations:
        if isinstance(st.channel, DistanceChannel):
            prop, model = st.channel.propagation, st.channel.model
            break
    if prop is not None:
        lines += ["", "[propagation]"]
        for f in fields(PropagationParams):
            lines.append(f"{f.name} = {_format_value(getattr(prop, f.name))}")
        lines.append(f"channel_model = {model.value}")

    for i, st in enumerate(scn.stations, start=1):
        lines += ["", f"[station.{i}]", f"rate_class = {st.rate_class}"]
        lam = "saturated" if st.saturated else _format_value(st.lambda_pkt_s)
        lines.append(f"lambda_pkt_s = {lam}")
        if st.payload_bytes is not None:
            lines.append(f"payload_bytes = {st.payload_bytes}")
        ch = st.channel
        if isinstance(ch, IdealChannel):
            lines.append("channel = ideal")
        elif isinstance(ch, FixedPer):
            lines.append(f"channel = per:{_format_value(ch.per)}")
        else:
            lines.append(f"channel = distance:{_format_value(ch.distance_m)}")
    return "\n".join(lines) + "\n"


def default_bundle() -> ScenarioBundle:
    """One saturated 11 Mbps station in the standard cell."""
    return ScenarioBundle(Scenario((StationConfig(rate_class=4),), NetworkParams()))
