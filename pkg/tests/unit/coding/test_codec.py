"""Tests for turbo encoding, serialization and depuncturing."""

from __future__ import annotations

import numpy as np
import pytest

from tinyturbo.coding.codec import (
    RATE_HALF,
    depuncture,
    encode,
    layout,
    make_code,
    multiplex,
    rsc_encode,
    serialize,
)
from tinyturbo.coding.interleave import apply
from tinyturbo.core.errors import ConfigurationError, ContractError


def test_all_zero_message_gives_all_zero_frame() -> None:
    code = make_code(40)
    bits = multiplex(code, encode(code, np.zeros(40, dtype=int)))
    assert bits.shape == (1, 132)
    assert not bits.any()
    assert np.all(serialize(code, encode(code, np.zeros(40, dtype=int))) == -1.0)


def test_impulse_response_of_lte_constituent() -> None:
    code = make_code(40)
    message = np.zeros(40, dtype=int)
    message[0] = 1
    frame = encode(code, message)
    # (1 + D^2 + D^3) / (1 + D + D^3) has period 7 after the first output
    assert frame.parity1[0, :8].tolist() == [1, 1, 0, 0, 1, 1, 1, 0]
    assert frame.parity1[0, 8:15].tolist() == frame.parity1[0, 1:8].tolist()


@pytest.mark.parametrize("trellis", ["lte", "turbo757"])
def test_both_encoders_terminate(trellis: str) -> None:
    code = make_code(40, trellis=trellis)
    rng = np.random.default_rng(3)
    messages = rng.integers(0, 2, size=(1000, 40))
    frame = encode(code, messages)
    assert not frame.final_state1.any()
    assert not frame.final_state2.any()


def test_second_encoder_sees_interleaved_message() -> None:
    code = make_code(40)
    rng = np.random.default_rng(11)
    message = rng.integers(0, 2, size=(1, 40))
    frame = encode(code, message)
    parity, tail_sys, tail_par, _ = rsc_encode(code.trellis, apply(code.interleaver, message))
    assert np.array_equal(frame.parity2, parity)
    assert np.array_equal(frame.tail_sys2, tail_sys)
    assert np.array_equal(frame.tail_par2, tail_par)
    assert np.array_equal(frame.systematic, message)


def test_encoding_is_linear() -> None:
    code = make_code(40)
    rng = np.random.default_rng(5)
    a = rng.integers(0, 2, size=(20, 40))
    b = rng.integers(0, 2, size=(20, 40))
    lhs = multiplex(code, encode(code, a)) ^ multiplex(code, encode(code, b))
    rhs = multiplex(code, encode(code, a ^ b))
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize(
    ("K", "trellis", "puncture", "N"),
    [
        (40, "lte", "none", 132),
        (40, "lte", "rate_half", 92),
        (200, "lte", "none", 612),
        (200, "lte", "rate_half", 412),
        (1008, "lte", "none", 3036),
        (40, "turbo757", "none", 128),
    ],
)
def test_frame_lengths(K: int, trellis: str, puncture: str, N: int) -> None:
    code = make_code(K, trellis=trellis, puncture=puncture)
    assert code.N == N
    assert code.label == f"Turbo({K},{N})"


def test_layout_interleaves_triplets_then_tails() -> None:
    code = make_code(40)
    plan = layout(code)
    assert plan.sys[:2].tolist() == [0, 3]
    assert plan.par1[:2].tolist() == [1, 4]
    assert plan.par2[:2].tolist() == [2, 5]
    assert plan.tail_sys1.tolist() == [120, 122, 124]
    assert plan.tail_par1.tolist() == [121, 123, 125]
    assert plan.tail_sys2.tolist() == [126, 128, 130]
    assert plan.tail_par2.tolist() == [127, 129, 131]


def test_rate_half_alternates_parities() -> None:
    code = make_code(4, f1=1, f2=2, puncture=RATE_HALF)
    plan = layout(code)
    assert plan.par1.tolist()[0] >= 0 and plan.par1.tolist()[1] == -1
    assert plan.par2.tolist()[0] == -1 and plan.par2.tolist()[1] >= 0
    assert plan.length == 2 * 4 + 12


def test_depuncture_puts_zero_at_punctured_positions() -> None:
    code = make_code(4, f1=1, f2=2, puncture="rate_half")
    received = np.arange(1, code.N + 1, dtype=float)
    frame = depuncture(code, received)
    assert frame.par1[0, 1] == 0.0 and frame.par1[0, 3] == 0.0
    assert frame.par2[0, 0] == 0.0 and frame.par2[0, 2] == 0.0
    assert np.count_nonzero(frame.par1) == 2


@pytest.mark.parametrize("puncture", ["none", "rate_half"])
def test_serialize_depuncture_round_trip(puncture: str) -> None:
    code = make_code(40, puncture=puncture)
    rng = np.random.default_rng(9)
    frame = encode(code, rng.integers(0, 2, size=(5, 40)))
    llr = depuncture(code, serialize(code, frame))
    assert np.array_equal(llr.sys, 2.0 * frame.systematic - 1)
    keep1, keep2 = code.puncture.keep(40)
    assert np.array_equal(llr.par1[:, keep1], 2.0 * frame.parity1[:, keep1] - 1)
    assert np.array_equal(llr.par2[:, keep2], 2.0 * frame.parity2[:, keep2] - 1)
    assert np.array_equal(llr.tail_par2, 2.0 * frame.tail_par2 - 1)


def test_message_length_is_checked() -> None:
    code = make_code(40)
    with pytest.raises(ContractError):
        encode(code, np.zeros(39, dtype=int))
    with pytest.raises(ContractError):
        encode(code, np.full(40, 2))
    with pytest.raises(ContractError):
        depuncture(code, np.zeros(131))


def test_unknown_names_are_configuration_errors() -> None:
    with pytest.raises(ConfigurationError):
        make_code(40, trellis="nope")
    with pytest.raises(ConfigurationError):
        make_code(40, puncture="rate_third")
    with pytest.raises(ConfigurationError):
        make_code(40, f1=3)
