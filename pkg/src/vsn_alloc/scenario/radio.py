"""Path-loss ranges under the protocol interference model.

Received power at distance d is ``p * g0 * d**-gamma``.  A link decodes
while that stays at or above the receive threshold alpha and disturbs other
receivers while it stays at or above the interference threshold beta.
"""

from __future__ import annotations

from vsn_alloc.errors import DomainError

from .models import RadioParams


def received_power(p_mw: float, distance_m: float, radio: RadioParams) -> float:
    """Power (mW) received from a transmitter at *distance_m*."""
    if distance_m <= 0:
        raise DomainError(f"distance must be positive, got {distance_m}")
    return p_mw * radio.antenna_gain * distance_m ** (-radio.path_loss_exponent)


def _range_for(p_mw: float, threshold_mw: float, radio: RadioParams) -> float:
    if not p_mw > 0:
        raise DomainError(f"transmit power must be positive, got {p_mw} mW")
    return (p_mw * radio.antenna_gain / threshold_mw) ** (1.0 / radio.path_loss_exponent)


def tx_range(p_mw: float, radio: RadioParams) -> float:
    """Largest distance at which a transmission at *p_mw* is still decodable."""
    return _range_for(p_mw, radio.rx_threshold_mw, radio)


def interference_range(p_mw: float, radio: RadioParams) -> float:
    """Largest distance at which a transmission at *p_mw* still interferes."""
    return _range_for(p_mw, radio.interference_threshold_mw, radio)


def max_tx_range(radio: RadioParams) -> float:
    return tx_range(radio.p_max_mw, radio)


def max_interference_range(radio: RadioParams) -> float:
    return interference_range(radio.p_max_mw, radio)
