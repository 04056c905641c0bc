"""Parameter records shared by the PHY, MAC-chain, timing, solver and simulator.

Unit conventions: times in seconds, rates in bit/s, distances in metres,
powers in dBm only where the field name says so.  Probabilities are plain
floats in [0, 1].  Sizes carry their unit in the field name (bytes or bits).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union


class UnsupportedModulationError(ValueError):
    """Raised for a PHY combination without a closed form or standard rate."""


class Modulation(Enum):
    DBPSK = "dbpsk"
    DQPSK = "dqpsk"
    CCK55 = "cck5.5"
    CCK11 = "cck11"


class ChannelModel(Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True)
class RateClassSpec:
    """One of the four 802.11b DSSS/CCK rate classes."""

    class_id: int
    data_rate: float  # bit/s
    modulation: Modulation
    chips_per_symbol: int
    bits_per_symbol: int
    sensitivity_dbm: float

    @property
    def spreading_gain_db(self) -> float:
        """Processing gain of the chip spreading, 10*log10(Cs/Bs)."""
        return 10.0 * math.log10(self.chips_per_symbol / self.bits_per_symbol)


#: The 802.11b rate classes, keyed by class id in increasing data-rate order.
RATE_CLASSES: dict[int, RateClassSpec] = {
    1: RateClassSpec(1, 1.0e6, Modulation.DBPSK, 11, 1, -85.0),
    2: RateClassSpec(2, 2.0e6, Modulation.DQPSK, 11, 2, -82.0),
    3: RateClassSpec(3, 5.5e6, Modulation.CCK55, 8, 4, -80.0),
    4: RateClassSpec(4, 11.0e6, Modulation.CCK11, 8, 8, -76.0),
}

N_RATE_CLASSES = 4

#: Modulation used for control/PLCP protection at each supported basic rate.
BASIC_RATE_OF_MODULATION = {Modulation.DBPSK: 1.0e6, Modulation.DQPSK: 2.0e6}

#: Rate class providing the spreading parameters of each basic-rate modulation.
BASIC_CLASS_OF_MODULATION = {Modulation.DBPSK: 1, Modulation.DQPSK: 2}


@dataclass(frozen=True)
class PropagationParams:
    """Log-distance path-loss and receiver noise parameters."""

    tx_power_dbm: float = 20.0
    noise_dbm_per_hz: float = -174.0
    noise_figure_db: float = 10.0
    bandwidth_hz: float = 22.0e6
    carrier_hz: float = 2.4e9
    path_loss_exponent: float = 4.0
    ref_distance_m: float = 1.0
    tx_gain: float = 1.0
    rx_gain: float = 1.0

    def __post_init__(self) -> None:
        if not 2.0 <= self.path_loss_exponent <= 6.0:
            raise ValueError(
                f"path_loss_exponent must lie in [2, 6], got {self.path_loss_exponent}"
            )
        if self.ref_distance_m <= 0:
            raise ValueError("ref_distance_m must be positive")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be positive")
        if self.carrier_hz <= 0:
            raise ValueError("carrier_hz must be positive")
        if self.tx_gain <= 0 or self.rx_gain <= 0:
            raise ValueError("antenna gains must be positive")


@dataclass(frozen=True)
class FrameLayout:
    """Bit budget of one data frame: PLCP preamble+header, MAC header, payload."""

    plcp_bits: int = 192
    mac_header_bytes: int = 28
    payload_bytes: int = 1028

    def __post_init__(self) -> None:
        if self.plcp_bits <= 0 or self.mac_header_bytes <= 0 or self.payload_bytes < 0:
            raise ValueError("frame sections must have positive length")

    @property
    def psdu_bytes(self) -> int:
        return self.mac_header_bytes + self.payload_bytes

    @property
    def psdu_bits(self) -> int:
        return 8 * self.psdu_bytes


@dataclass(frozen=True)
class NetworkParams:
    """MAC/PHY constants of the 802.11b cell (defaults: long-preamble DSSS)."""

    slot_s: float = 20e-6
    sifs_s: float = 10e-6
    difs_s: float = 50e-6
    eifs_s: float = 364e-6  # parsed and kept; the analytical model never uses it
    ack_timeout_s: float = 364e-6
    prop_delay_s: float = 1e-6
    ack_bytes: int = 14
    mac_header_bytes: int = 28
    plcp_preamble_bits: int = 144
    plcp_header_bits: int = 48
    basic_rate: float = 1.0e6  # bit/s, PLCP/control rate
    w0: int = 32
    backoff_stages: int = 5  # stages beyond the zero-th one
    payload_bytes: int = 1028  # network-wide default payload

    def __post_init__(self) -> None:
        if self.w0 < 1:
            raise ValueError("w0 must be >= 1")
        if self.backoff_stages < 0:
            raise ValueError("backoff_stages must be >= 0")
        for name in ("slot_s", "sifs_s", "difs_s", "ack_timeout_s", "basic_rate"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def plcp_bits(self) -> int:
        """PHY header on air: preamble plus PLCP header, in bits."""
        return self.plcp_preamble_bits + self.plcp_header_bits

    @property
    def w_max(self) -> int:
        return (1 << self.backoff_stages) * self.w0

    @property
    def basic_modulation(self) -> Modulation:
        """Modulation protecting the PLCP: DBPSK at 1 Mbps, DQPSK at 2 Mbps."""
        for mod, rate in BASIC_RATE_OF_MODULATION.items():
            if rate == self.basic_rate:
                return mod
        raise UnsupportedModulationError(
            f"no 802.11b control modulation at {self.basic_rate} bit/s"
        )

    def layout_for(self, payload_bytes: int | None = None) -> FrameLayout:
        pl = self.payload_bytes if payload_bytes is None else payload_bytes
        return FrameLayout(self.plcp_bits, self.mac_header_bytes, pl)


@dataclass(frozen=True)
class IdealChannel:
    """Error-free channel: frame error probability 0."""


@dataclass(frozen=True)
class FixedPer:
    """Channel with a fixed frame error probability."""

    per: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.per <= 1.0:
            raise ValueError(f"per must lie in [0, 1], got {self.per}")


@dataclass(frozen=True)
class DistanceChannel:
    """Channel whose frame error probability follows from the link budget."""

    distance_m: float
    propagation: PropagationParams = field(default_factory=PropagationParams)
    model: ChannelModel = ChannelModel.RAYLEIGH


ChannelSpec = Union[IdealChannel, FixedPer, DistanceChannel]


@dataclass(frozen=True)
class StationConfig:
    """One contending station: rate class, offered load and channel."""

    rate_class: int
    lambda_pkt_s: float = math.inf  # packet arrival rate; inf = saturated
    payload_bytes: int | None = None  # None = network default
    channel: ChannelSpec = field(default_factory=IdealChannel)

    def __post_init__(self) -> None:
        if self.rate_class not in RATE_CLASSES:
            raise ValueError(f"rate_class must be in {sorted(RATE_CLASSES)}")
        if self.lambda_pkt_s < 0:
            raise ValueError("lambda_pkt_s must be >= 0")

    @property
    def saturated(self) -> bool:
        return math.isinf(self.lambda_pkt_s)

    @property
    def spec(self) -> RateClassSpec:
        return RATE_CLASSES[self.rate_class]


@dataclass(frozen=True)
class Scenario:
    """A cell of N stations contending towards one access point."""

    stations: tuple[StationConfig, ...]
    params: NetworkParams = field(default_factory=NetworkParams)

    def __post_init__(self) -> None:
        if len(self.stations) < 1:
            raise ValueError("a scenario needs at least one station")
        object.__setattr__(self, "stations", tuple(self.stations))

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    def payload_bytes(self, s: int) -> int:
        st = self.stations[s]
        return self.params.payload_bytes if st.payload_bytes is None else st.payload_bytes

    def class_ids(self) -> tuple[int, ...]:
        return tuple(st.rate_class for st in self.stations)

    def with_stations(self, stations) -> "Scenario":
        return replace(self, stations=tuple(stations))
