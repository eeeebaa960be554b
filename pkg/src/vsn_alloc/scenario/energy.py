"""Energy and processing figures for radio links and visual applications.

Radio energy is per bit: a transmitter over distance d pays
``beta1 + beta2 * d**gamma`` and a receiver pays ``rho``.  Visual
applications additionally burn CPU power on the camera node, computed from
per-image processing times of a BeagleBone-class board.
"""

from __future__ import annotations

import numpy as np

from vsn_alloc.errors import DomainError

from .models import RadioParams

# -- BeagleBone processing constants ----------------------------------------

P_CPU_W = 2.1
FRAME_PIXELS = 640 * 480
PIXEL_TIME_S = 1.6e-7
TAU_OFF_S = FRAME_PIXELS * PIXEL_TIME_S  # detector initialisation per frame
TAU_DET_S = 0.31e-3
TAU_DESC_S = 0.16e-3

# Compress-then-analyze: per-image CPU time keyed by bits sent per query.
CTA_CPU_TIME_S: dict[float, float] = {20_000.0: 0.0245}

# Analyze-then-compress: features needed for the target precision, keyed by
# bits per query.
ATC_FEATURES: dict[float, int] = {12_000.0: 100}


def _lookup(table: dict[float, float], key: float) -> float:
    """Piecewise-linear lookup, flat beyond the tabulated range."""
    xs = np.array(sorted(table))
    ys = np.array([table[x] for x in xs], dtype=float)
    return float(np.interp(key, xs, ys))


# -- radio -------------------------------------------------------------------

def tx_energy_per_bit(distance_m: float, radio: RadioParams) -> float:
    """Transmit energy (J/bit) over *distance_m*."""
    if distance_m < 0:
        raise DomainError(f"distance must be non-negative, got {distance_m}")
    return (
        radio.tx_energy_base_j_per_bit
        + radio.tx_energy_dist_j_per_bit_m * distance_m ** radio.path_loss_exponent
    )


def rx_energy_per_bit(radio: RadioParams) -> float:
    return radio.rx_energy_j_per_bit


# -- visual processing ---------------------------------------------------------

def cta_cpu_time(rate_bits: float) -> float:
    """Per-image CPU seconds of a CTA pipeline sending *rate_bits* per query."""
    if not rate_bits > 0:
        raise DomainError(f"rate must be positive, got {rate_bits}")
    return _lookup(CTA_CPU_TIME_S, rate_bits)


def atc_features(rate_bits: float) -> int:
    """Feature count an ATC pipeline needs at *rate_bits* per query."""
    if not rate_bits > 0:
        raise DomainError(f"rate must be positive, got {rate_bits}")
    return int(round(_lookup(ATC_FEATURES, rate_bits)))


def atc_cpu_time(rate_bits: float, features: int | None = None) -> float:
    """Per-image CPU seconds of an ATC pipeline extracting *features* keypoints."""
    if not rate_bits > 0:
        raise DomainError(f"rate must be positive, got {rate_bits}")
    if features is None:
        features = atc_features(rate_bits)
    if features < 0:
        raise DomainError(f"feature count must be non-negative, got {features}")
    return TAU_OFF_S + features * (TAU_DET_S + TAU_DESC_S)


def cpu_energy_cta(rate_bits: float) -> float:
    """Joules per processed image for compress-then-analyze."""
    return P_CPU_W * cta_cpu_time(rate_bits)


def cpu_energy_atc(rate_bits: float, features: int | None = None) -> float:
    """Joules per processed image for analyze-then-compress.

    Affine in *features* with slope ``P_CPU_W * (TAU_DET_S + TAU_DESC_S)``.
    """
    return P_CPU_W * atc_cpu_time(rate_bits, features)


def processing_load_mips(cpu_time_s: float, frame_rate_hz: float, node_mips: float) -> float:
    """Share of a node's MIPS consumed by an application.

    The busy fraction ``cpu_time_s * frame_rate_hz`` times the node capacity.
    """
    if cpu_time_s < 0 or frame_rate_hz < 0 or node_mips <= 0:
        raise DomainError("cpu time and frame rate must be >= 0, node MIPS > 0")
    return cpu_time_s * frame_rate_hz * node_mips


def processing_power_w(energy_per_image_j: float, frame_rate_hz: float) -> float:
    """Average CPU power drawn at *frame_rate_hz* queries per second."""
    if energy_per_image_j < 0 or frame_rate_hz < 0:
        raise DomainError("energy and frame rate must be non-negative")
    return energy_per_image_j * frame_rate_hz


def max_lifetime_s(energy_j: float, power_w: float) -> float:
    """How long a battery of *energy_j* lasts under a constant *power_w* draw."""
    if power_w <= 0:
        return float("inf")
    return energy_j / power_w
