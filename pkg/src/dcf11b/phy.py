"""Link budget, BER and FER models for the 802.11b DSSS/CCK rate classes.

SNR quantities cross module boundaries in dB; every BER closed form works
on linear SNR per bit.  Supported (modulation, channel) pairs:

====================  =======================================  =========================================
modulation            AWGN                                     Rayleigh (mean SNR)
====================  =======================================  =========================================
DBPSK                 erfc-based binary form                   1 / (2 (1 + g))
DQPSK                 Marcum Q1(a, b) minus Bessel correction  half of 1 - sqrt(k g / (1 + k g)), k=1/sqrt(2)
CCK 5.5 / CCK 11      orthogonal-signalling double integral    finite alternating binomial sum
====================  =======================================  =========================================

The CCK/AWGN integrand is restored to a proper probability by normalising
both Gaussian densities with 1/sqrt(2*pi); its exponent defaults to the
half-codebook form (alpha/2 - 1 correct-decision terms) and can be switched
to the full orthogonal-set form (2^bits_per_symbol - 1) via ``cck_form``.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import constants, special

from .params import (
    BASIC_CLASS_OF_MODULATION,
    UnsupportedModulationError,
    ChannelModel,
    FrameLayout,
    Modulation,
    PropagationParams,
    RATE_CLASSES,
    RateClassSpec,
    Scenario,
    DistanceChannel,
    FixedPer,
    IdealChannel,
)


class BracketError(ValueError):
    """Raised when a root search bracket does not contain a crossing."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# ---------------------------------------------------------------------------
# link budget
# ---------------------------------------------------------------------------

def path_loss_db(distance_m: float, prop: PropagationParams) -> float:
    """Log-distance path loss, free-space-referenced at ref_distance_m."""
    if distance_m < prop.ref_distance_m:
        raise ValueError(
            f"distance {distance_m} m below reference distance "
            f"{prop.ref_distance_m} m: path-loss model undefined there"
        )
    wavelength = constants.c / prop.carrier_hz
    l0 = -10.0 * math.log10(
        prop.tx_gain
        * prop.rx_gain
        * wavelength**2
        / ((4.0 * math.pi) ** 2 * prop.ref_distance_m**prop.path_loss_exponent)
    )
    return l0 + 10.0 * prop.path_loss_exponent * math.log10(
        distance_m / prop.ref_distance_m
    )


def received_snr_db(distance_m: float, prop: PropagationParams) -> float:
    """SNR at the receiver: tx power minus path loss minus noise floor."""
    noise_floor_dbm = (
        prop.noise_dbm_per_hz
        + 10.0 * math.log10(prop.bandwidth_hz)
        + prop.noise_figure_db
    )
    return prop.tx_power_dbm - path_loss_db(distance_m, prop) - noise_floor_dbm


def snr_per_bit_db(snr_db: float, spec: RateClassSpec) -> float:
    """SNR per transmitted bit: channel SNR plus the spreading gain Cs/Bs."""
    return snr_db + spec.spreading_gain_db


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

_MARCUM_ASYMPTOTIC_AB = 700.0
_MARCUM_CHUNK = 64
_MARCUM_RTOL = 1e-16


def marcum_q1(a: float, b: float) -> float:
    """First-order Marcum Q function.

    Series over exponentially scaled Bessel terms, truncated once a term
    drops below 1e-16 of the partial sum.  Beyond a*b = 700 the leading
    erfc asymptote is used; it needs b - a to be large, which holds for
    the fixed-ratio (a, b) pairs the DQPSK error form produces there.
    """
    if a < 0 or b < 0:
        raise ValueError("marcum_q1 requires a, b >= 0")
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)
    if a > b:
        # complementary identity keeps the series ratio a/b below one
        bulk = math.exp(-0.5 * (a - b) ** 2) * float(special.i0e(a * b))
        return 1.0 - marcum_q1(b, a) + bulk
    if a * b > _MARCUM_ASYMPTOTIC_AB:
        return 0.5 * math.erfc((b - a) / math.sqrt(2.0))
    ratio = a / b
    scale = math.exp(-0.5 * (a - b) ** 2)
    total = 0.0
    k0 = 0
    while True:
        ks = np.arange(k0, k0 + _MARCUM_CHUNK)
        terms = ratio**ks * special.ive(ks, a * b)
        total += float(terms.sum())
        if terms[-1] < _MARCUM_RTOL * total:
            break
        k0 += _MARCUM_CHUNK
        if k0 > 100_000:  # unreachable for a*b <= 700; guards misuse
            break
    return scale * total


_GL_NODES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    if n not in _GL_NODES:
        _GL_NODES[n] = np.polynomial.legendre.leggauss(n)
    x, w = _GL_NODES[n]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(w @ f(mid + half * x))


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = 1e-8,
    max_depth: int = 30,
) -> float:
    """Panel-adaptive Gauss-Legendre quadrature with a relative tolerance.

    Panels are bisected until the 16- and 32-node estimates agree to the
    width-proportional share of the global tolerance.
    """
    coarse = _gauss_legendre(f, a, b, 32)
    scale = max(abs(coarse), 1e-300)
    total = 0.0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        est16 = _gauss_legendre(f, lo, hi, 16)
        est32 = _gauss_legendre(f, lo, hi, 32)
        budget = rtol * scale * (hi - lo) / (b - a)
        if abs(est32 - est16) <= budget or depth >= max_depth:
            total += est32
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    return total


# ---------------------------------------------------------------------------
# bit error rates
# ---------------------------------------------------------------------------

_CCK_ALPHA = {Modulation.CCK55: 4, Modulation.CCK11: 8}


def _ber_awgn_dbpsk(g: float) -> float:
    return 0.5 * float(special.erfc(math.sqrt(g)))


def _dqpsk_ab(g: float) -> tuple[float, float]:
    a = math.sqrt(2.0 * g * (1.0 - math.sqrt(0.5)))
    b = math.sqrt(2.0 * g * (1.0 + math.sqrt(0.5)))
    return a, b


def _ber_awgn_dqpsk(g: float) -> float:
    a, b = _dqpsk_ab(g)
    bessel = float(special.i0e(a * b)) * math.exp(-0.5 * (a - b) ** 2)
    return max(0.0, marcum_q1(a, b) - 0.5 * bessel)


def _cck_exponent(modulation: Modulation, cck_form: str) -> int:
    if cck_form == "printed":
        return _CCK_ALPHA[modulation] // 2 - 1
    if cck_form == "standard":
        bits = {Modulation.CCK55: 4, Modulation.CCK11: 8}[modulation]
        return (1 << bits) - 1
    raise ValueError(f"cck_form must be 'printed' or 'standard', got {cck_form!r}")


def _ber_awgn_cck(g: float, modulation: Modulation, cck_form: str) -> float:
    # correct-decision probability of orthogonal signalling:
    #   integral of [P(|noise| < z + sqrt(g))]^e * phi(z) over z > -sqrt(g)
    e = _cck_exponent(modulation, cck_form)
    root = math.sqrt(g)
    inv_sqrt2pi = 1.0 / math.sqrt(2.0 * math.pi)

    def integrand(z: np.ndarray) -> np.ndarray:
        inner = special.erf((z + root) / math.sqrt(2.0))
        return inner**e * np.exp(-0.5 * z * z) * inv_sqrt2pi

    # nominal range [-sqrt(g), sqrt(g)+10], clipped to the outer Gaussian's
    # support so the quadrature nodes cannot miss the mass at large g
    lo = max(-root, -12.0)
    hi = min(root + 10.0, 12.0)
    p_correct = adaptive_gauss_legendre(integrand, lo, hi, rtol=1e-8)
    return min(1.0, max(0.0, 1.0 - p_correct))


def _ber_rayleigh_dbpsk(g: float) -> float:
    return 0.5 / (1.0 + g)


def _ber_rayleigh_dqpsk(g: float) -> float:
    k = math.sqrt(0.5)
    return 0.5 * (1.0 - math.sqrt(k * g / (1.0 + k * g)))


def _ber_rayleigh_cck(g: float, modulation: Modulation) -> float:
    a = _CCK_ALPHA[modulation]
    lead = 2.0 ** (a - 1) / (2.0**a - 1.0)
    total = 0.0
    for i in range(1, a):
        total += (-1.0) ** (i + 1) * math.comb(a - 1, i) / (1.0 + i + i * g)
    return lead * total


def ber(
    gamma: float,
    modulation: Modulation,
    channel: ChannelModel,
    cck_form: str = "printed",
) -> float:
    """Bit error probability at linear SNR per bit ``gamma``."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if channel is ChannelModel.AWGN:
        if modulation is Modulation.DBPSK:
            return _ber_awgn_dbpsk(gamma)
        if modulation is Modulation.DQPSK:
            return _ber_awgn_dqpsk(gamma)
        if modulation in _CCK_ALPHA:
            return _ber_awgn_cck(gamma, modulation, cck_form)
    elif channel is ChannelModel.RAYLEIGH:
        if modulation is Modulation.DBPSK:
            return _ber_rayleigh_dbpsk(gamma)
        if modulation is Modulation.DQPSK:
            return _ber_rayleigh_dqpsk(gamma)
        if modulation in _CCK_ALPHA:
            return _ber_rayleigh_cck(gamma, modulation)
    raise UnsupportedModulationError(
        f"no BER form for modulation={modulation} over channel={channel}"
    )


# ---------------------------------------------------------------------------
# frame error rate
# ---------------------------------------------------------------------------

def frame_error_rate(
    layout: FrameLayout,
    spec: RateClassSpec,
    basic_modulation: Modulation,
    gamma_basic: float,
    gamma_data: float,
    channel: ChannelModel,
    cck_form: str = "printed",
) -> float:
    """Frame error probability: PLCP at the basic rate, PSDU at the data rate.

    Bit errors are independent, so each section survives with
    (1 - ber)^bits; the PLCP exponent is its on-air bit count, the PSDU
    exponent is 8 * (MAC header + payload) bytes.
    """
    pb_basic = ber(gamma_basic, basic_modulation, channel, cck_form)
    pb_data = ber(gamma_data, spec.modulation, channel, cck_form)
    ok_plcp = (1.0 - pb_basic) ** layout.plcp_bits
    ok_psdu = (1.0 - pb_data) ** layout.psdu_bits
    return 1.0 - ok_plcp * ok_psdu


def per_at_distance(
    distance_m: float,
    prop: PropagationParams,
    spec: RateClassSpec,
    layout: FrameLayout,
    channel: ChannelModel = ChannelModel.RAYLEIGH,
    basic_modulation: Modulation = Modulation.DBPSK,
    cck_form: str = "printed",
) -> float:
    """Frame error probability of a station at a given link distance."""
    snr = received_snr_db(distance_m, prop)
    basic_spec = RATE_CLASSES[BASIC_CLASS_OF_MODULATION[basic_modulation]]
    gamma_basic = db_to_linear(snr_per_bit_db(snr, basic_spec))
    gamma_data = db_to_linear(snr_per_bit_db(snr, spec))
    return frame_error_rate(
        layout, spec, basic_modulation, gamma_basic, gamma_data, channel, cck_form
    )


def rate_switch_distance(
    spec: RateClassSpec,
    prop: PropagationParams,
    layout: FrameLayout,
    per_threshold: float,
    channel: ChannelModel = ChannelModel.RAYLEIGH,
    basic_modulation: Modulation = Modulation.DBPSK,
    d_max: float = 1000.0,
    resolution_m: float = 0.01,
) -> float:
    """Largest distance at which the frame error rate stays at or below a threshold.

    Bisection between the reference distance and ``d_max``; relies on the
    FER growing with distance over that bracket.  Returns ``d_max`` when the
    threshold is never exceeded and raises :class:`BracketError` when it is
    already exceeded at the reference distance.
    """
    lo = prop.ref_distance_m

    def fer_at(d: float) -> float:
        return per_at_distance(
            d, prop, spec, layout, channel, basic_modulation
        )

    if fer_at(d_max) <= per_threshold:
        return d_max
    if fer_at(lo) > per_threshold:
        raise BracketError(
            f"frame error rate exceeds {per_threshold} already at the "
            f"reference distance {lo} m"
        )
    hi = d_max
    while hi - lo > resolution_m:
        mid = 0.5 * (lo + hi)
        if fer_at(mid) <= per_threshold:
            lo = mid
        else:
            hi = mid
    return lo


def scenario_error_rates(scn: Scenario, cck_form: str = "printed") -> list[float]:
    """Per-station frame error probabilities implied by each channel spec."""
    rates = []
    for s, st in enumerate(scn.stations):
        ch = st.channel
        if isinstance(ch, IdealChannel):
            rates.append(0.0)
        elif isinstance(ch, FixedPer):
            rates.append(ch.per)
        elif isinstance(ch, DistanceChannel):
            layout = scn.params.layout_for(scn.payload_bytes(s))
            rates.append(
                per_at_distance(
                    ch.distance_m,
                    ch.propagation,
                    st.spec,
                    layout,
                    ch.model,
                    scn.params.basic_modulation,
                    cck_form,
                )
            )
        else:
            raise TypeError(f"unknown channel spec {ch!r}")
    return rates
