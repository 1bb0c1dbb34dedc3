"""Iterative turbo decoding with weighted extrinsic exchange."""

from __future__ import annotations

import numpy as np
import pytest

from brute_force import exhaustive_posterior

from tinyturbo.channel.model import demap
from tinyturbo.coding.codec import depuncture, encode, make_code, serialize
from tinyturbo.core.errors import ConfigurationError, ContractError
from tinyturbo.decoding.decoder import DecodeConfig, turbo_decode, weighted_extrinsic
from tinyturbo.decoding.siso import SisoAlgorithm
from tinyturbo.decoding.weights import WeightSet, tinyturbo_preset


def _noisy_frames(code, count: int, sigma: float, seed: int):
    rng = np.random.default_rng(seed)
    messages = rng.integers(0, 2, size=(count, code.K))
    symbols = serialize(code, encode(code, messages))
    received = symbols + sigma * rng.standard_normal(symbols.shape)
    return messages, depuncture(code, demap(received, sigma))


@pytest.mark.parametrize("algorithm", ["map", "max_log_map"])
def test_noiseless_frames_decode_to_the_message(algorithm: str) -> None:
    code = make_code(40)
    messages = np.random.default_rng(0).integers(0, 2, size=(20, 40))
    llr = depuncture(code, demap(serialize(code, encode(code, messages)), 0.5))
    result = turbo_decode(code, llr, DecodeConfig.classical(3, algorithm))
    assert np.array_equal(result.bits, messages)


def test_classical_equals_all_ones_shared() -> None:
    code = make_code(40)
    _, llr = _noisy_frames(code, 100, 1.0, seed=1)
    classical = turbo_decode(code, llr, DecodeConfig.classical(3, "max_log_map"))
    shared = turbo_decode(code, llr, DecodeConfig(3, "max_log_map", WeightSet.ones(3, "shared")))
    assert np.array_equal(classical.posterior, shared.posterior)
    assert np.array_equal(classical.trajectory, shared.trajectory)


def test_constant_positional_equals_shared() -> None:
    code = make_code(40)
    _, llr = _noisy_frames(code, 30, 1.0, seed=2)
    preset = tinyturbo_preset()
    positional = WeightSet("positional", np.repeat(preset.values[:, :, None], code.K, axis=2))
    shared_out = turbo_decode(code, llr, DecodeConfig(3, "max_log_map", preset))
    positional_out = turbo_decode(code, llr, DecodeConfig(3, "max_log_map", positional))
    assert np.array_equal(shared_out.posterior, positional_out.posterior)


def test_shared_weights_apply_to_any_blocklength() -> None:
    preset = DecodeConfig(3, "max_log_map", tinyturbo_preset())
    for K, puncture in ((40, "none"), (200, "none"), (200, "rate_half")):
        code = make_code(K, puncture=puncture)
        _, llr = _noisy_frames(code, 4, 0.8, seed=K)
        assert turbo_decode(code, llr, preset).posterior.shape == (4, K)


def test_trajectory_prefix_property() -> None:
    code = make_code(40)
    _, llr = _noisy_frames(code, 10, 1.2, seed=3)
    six = turbo_decode(code, llr, DecodeConfig.classical(6, "map"))
    three = turbo_decode(code, llr, DecodeConfig.classical(6, "map").truncate(3))
    assert six.trajectory.shape == (6, 10, 40)
    np.testing.assert_array_equal(six.trajectory[:3], three.trajectory)
    np.testing.assert_array_equal(three.posterior, three.trajectory[-1])


def test_first_constituent_matches_exhaustive_oracle() -> None:
    code = make_code(8, f1=1, f2=2)
    _, llr = _noisy_frames(code, 5, 1.0, seed=4)
    result = turbo_decode(code, llr, DecodeConfig.classical(1, SisoAlgorithm.MAP), record=True)
    post1 = result.tape.iterations[0].post1
    for b in range(5):
        expected = exhaustive_posterior(
            code.trellis.spec,
            llr.sys[b],
            llr.par1[b],
            np.zeros(8),
            llr.tail_sys1[b],
            llr.tail_par1[b],
        )
        np.testing.assert_allclose(post1[b], expected, rtol=1e-9, atol=1e-9)


def test_decode_is_pure() -> None:
    code = make_code(40)
    _, llr = _noisy_frames(code, 8, 1.0, seed=5)
    cfg = DecodeConfig(3, "max_log_map", tinyturbo_preset())
    first = turbo_decode(code, llr, cfg).posterior
    turbo_decode(code, llr.select(slice(0, 2)), cfg)
    assert np.array_equal(turbo_decode(code, llr, cfg).posterior, first)


def test_weighted_extrinsic_examples() -> None:
    out = weighted_extrinsic(np.array([4.0]), np.array([1.0]), np.array([0.5]), (0.445, 0.584, 1.0))
    assert out[0] == pytest.approx(0.696)
    classical = weighted_extrinsic(np.array([3.0]), np.array([1.0]), np.array([0.5]), (1.0, 1.0, 1.0))
    assert classical[0] == 1.5
    zero = weighted_extrinsic(np.ones(5), np.ones(5), np.ones(5), (0.0, 0.0, 0.0))
    assert not zero.any()


def test_weighted_extrinsic_positional_weights() -> None:
    w1 = np.array([1.0, 2.0, 3.0])
    out = weighted_extrinsic(np.ones(3), np.zeros(3), np.zeros(3), (w1, 1.0, 1.0))
    assert out.tolist() == [1.0, 2.0, 3.0]
    with pytest.raises(ContractError):
        weighted_extrinsic(np.ones(3), np.zeros(3), np.zeros(3), (np.ones(4), 1.0, 1.0))
    with pytest.raises(ContractError):
        weighted_extrinsic(np.ones(3), np.zeros(2), np.zeros(3), (1.0, 1.0, 1.0))


def test_mismatched_frame_or_weights_are_rejected() -> None:
    code = make_code(40)
    _, llr = _noisy_frames(make_code(48), 2, 1.0, seed=6)
    with pytest.raises(ContractError):
        turbo_decode(code, llr, DecodeConfig.classical(1))
    _, llr = _noisy_frames(code, 2, 1.0, seed=6)
    with pytest.raises(ConfigurationError):
        turbo_decode(code, llr, DecodeConfig(1, "map", WeightSet.ones(1, "positional", K=48)))
    with pytest.raises(ConfigurationError):
        DecodeConfig(2, "map", tinyturbo_preset())
