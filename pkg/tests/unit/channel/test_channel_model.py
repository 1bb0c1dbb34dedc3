"""Tests for BPSK transmission and channel LLR demapping."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tinyturbo.channel.model import ChannelSpec, bpsk, demap, snr_to_sigma, transmit
from tinyturbo.channel.streams import frame_rng, point_stream
from tinyturbo.core.errors import ConfigurationError, ContractError


def test_snr_to_sigma() -> None:
    assert snr_to_sigma(0.0) == 1.0
    assert snr_to_sigma(-1.0) == pytest.approx(1.1220, abs=1e-4)
    assert snr_to_sigma(-20.0 * math.log10(0.5)) == pytest.approx(0.5)


def test_bpsk_maps_one_to_plus_one() -> None:
    assert bpsk(np.array([0, 1])).tolist() == [-1.0, 1.0]


def test_demap_examples() -> None:
    assert demap(np.array([1.0]), 1.0)[0] == 2.0
    assert demap(np.array([0.0]), 0.3)[0] == 0.0
    assert demap(np.array([-0.5]), 0.5)[0] == -4.0


def test_demap_rejects_non_positive_sigma() -> None:
    with pytest.raises(ContractError):
        demap(np.ones(3), 0.0)


def test_high_snr_is_nearly_noiseless() -> None:
    x = bpsk(np.array([0, 1, 1, 0]))
    y = transmit(x, ChannelSpec(snr_db=200.0), np.random.default_rng(0))
    assert np.allclose(y, x, atol=1e-8)


def test_bursty_hit_rate() -> None:
    spec = ChannelSpec(kind="bursty", snr_db=300.0, sigma_b=5.0, rho=0.01)
    x = np.zeros(1_000_000)
    y = transmit(x, spec, np.random.default_rng(1))
    fraction = np.mean(np.abs(y) > 1e-6)
    assert 0.009 <= fraction <= 0.011


def test_deterministic_burst_touches_one_symbol() -> None:
    spec = ChannelSpec(kind="deterministic_burst", snr_db=300.0, burst_position=56, burst_amplitude=10.0)
    x = -np.ones(132)
    y = transmit(x, spec, np.random.default_rng(2))
    moved = np.flatnonzero(np.abs(y - x) > 1e-6)
    assert moved.tolist() == [56]
    assert y[56] == pytest.approx(9.0)


def test_burst_outside_frame_is_rejected() -> None:
    spec = ChannelSpec(kind="deterministic_burst", burst_position=200)
    with pytest.raises(ContractError):
        transmit(np.ones(132), spec, np.random.default_rng(0))


def test_spec_validation() -> None:
    with pytest.raises(ConfigurationError):
        ChannelSpec(kind="rayleigh")
    with pytest.raises(ConfigurationError):
        ChannelSpec(rho=1.5)
    with pytest.raises(ConfigurationError):
        ChannelSpec(sigma_b=-1.0)


def test_frame_streams_are_reproducible_and_distinct() -> None:
    a = frame_rng(5, 1, 17).standard_normal(8)
    b = frame_rng(5, 1, 17).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, frame_rng(5, 1, 18).standard_normal(8))
    assert not np.array_equal(a, frame_rng(6, 1, 17).standard_normal(8))
    assert not np.array_equal(a, frame_rng(5, point_stream(1, 1), 17).standard_normal(8))


def test_point_streams_are_distinct_within_a_grid() -> None:
    ids = {point_stream(1, point) for point in range(256)}
    assert len(ids) == 256
    assert not ids & {point_stream(2, point) for point in range(256)}


@pytest.mark.parametrize("point", [-1, 256, 1000])
def test_point_stream_rejects_grid_index_out_of_range(point: int) -> None:
    with pytest.raises(ConfigurationError):
        point_stream(1, point)
