"""Tests for path-loss ranges and radio parameter validation."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from vsn_alloc.errors import DomainError
from vsn_alloc.scenario.models import RadioParams, dbm_to_mw
from vsn_alloc.scenario.radio import (
    interference_range,
    max_interference_range,
    max_tx_range,
    received_power,
    tx_range,
)


class TestRanges:
    def test_tx_range_at_zero_dbm(self) -> None:
        radio = RadioParams.from_dbm(p_max_dbm=0.0)
        r = tx_range(radio.p_max_mw, radio)
        assert 58.0 <= r <= 61.0
        assert r == pytest.approx(59.86, abs=0.01)

    def test_interference_range_at_zero_dbm(self) -> None:
        radio = RadioParams.from_dbm(p_max_dbm=0.0)
        r = interference_range(radio.p_max_mw, radio)
        assert 117.0 <= r <= 121.0
        assert r == pytest.approx(119.4, abs=0.1)

    def test_tx_range_at_minus_ten_dbm(self) -> None:
        radio = RadioParams.from_dbm(p_max_dbm=-10.0)
        r = max_tx_range(radio)
        assert 32.0 <= r <= 35.0
        assert r == pytest.approx(33.66, abs=0.01)

    def test_interference_range_exceeds_tx_range(self) -> None:
        radio = RadioParams.from_dbm()
        assert max_interference_range(radio) > max_tx_range(radio)

    def test_range_scales_with_fourth_root_of_power(self) -> None:
        radio = RadioParams.from_dbm()
        ratio = tx_range(10.0, radio) / tx_range(1.0, radio)
        assert ratio == pytest.approx(10 ** 0.25)

    def test_equal_thresholds_give_equal_ranges(self) -> None:
        alpha = dbm_to_mw(-92.0)
        radio = RadioParams.model_construct(
            p_max_mw=1.0, rx_threshold_mw=alpha, interference_threshold_mw=alpha
        )
        assert interference_range(1.0, radio) == pytest.approx(tx_range(1.0, radio))

    def test_received_power_at_tx_range_equals_threshold(self) -> None:
        radio = RadioParams.from_dbm()
        p = received_power(radio.p_max_mw, max_tx_range(radio), radio)
        assert p == pytest.approx(radio.rx_threshold_mw)


class TestRadioErrors:
    @pytest.mark.parametrize("power", [0.0, -1.0])
    def test_nonpositive_power_rejected(self, power: float) -> None:
        radio = RadioParams.from_dbm()
        with pytest.raises(DomainError):
            tx_range(power, radio)
        with pytest.raises(DomainError):
            interference_range(power, radio)

    def test_zero_distance_rejected(self) -> None:
        with pytest.raises(DomainError):
            received_power(1.0, 0.0, RadioParams.from_dbm())

    def test_interference_threshold_must_be_below_decode_threshold(self) -> None:
        with pytest.raises(ValidationError):
            RadioParams.from_dbm(rx_threshold_dbm=-92.0, interference_threshold_dbm=-80.0)

    def test_dbm_conversion(self) -> None:
        assert dbm_to_mw(0.0) == pytest.approx(1.0)
        assert dbm_to_mw(-10.0) == pytest.approx(0.1)
