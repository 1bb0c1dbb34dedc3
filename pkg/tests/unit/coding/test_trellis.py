"""Tests for RSC trellis construction."""

from __future__ import annotations

import itertools

import pytest

from tinyturbo.coding.trellis import RscSpec, build_trellis, lte_trellis, turbo757_trellis
from tinyturbo.core.errors import ConfigurationError


def _register_step(spec: RscSpec, register: list[int], bit: int) -> tuple[list[int], int]:
    """One step of the shift register; ``register[0]`` is the most recent feedback bit."""
    feedback = bit
    for j in range(1, spec.memory + 1):
        if spec.feedback >> j & 1:
            feedback ^= register[j - 1]
    parity = feedback if spec.feedforward & 1 else 0
    for j in range(1, spec.memory + 1):
        if spec.feedforward >> j & 1:
            parity ^= register[j - 1]
    return [feedback] + register[:-1], parity


def _state_of(register: list[int]) -> int:
    return sum(bit << j for j, bit in enumerate(register))


def test_lte_tables_match_hand_stepped_register() -> None:
    trellis = lte_trellis()
    spec = trellis.spec
    assert trellis.num_states == 8
    for register in itertools.product((0, 1), repeat=3):
        state = _state_of(list(register))
        for bit in (0, 1):
            after, parity = _register_step(spec, list(register), bit)
            assert trellis.next_state[state, bit] == _state_of(after)
            assert trellis.parity_out[state, bit] == parity


def test_turbo757_has_four_states() -> None:
    assert turbo757_trellis().num_states == 4


@pytest.mark.parametrize("trellis", [lte_trellis(), turbo757_trellis()])
def test_zero_state_absorbs_zero_input(trellis) -> None:
    assert trellis.next_state[0, 0] == 0
    assert trellis.parity_out[0, 0] == 0


@pytest.mark.parametrize("trellis", [lte_trellis(), turbo757_trellis()])
def test_each_input_permutes_states(trellis) -> None:
    for bit in (0, 1):
        assert sorted(trellis.next_state[:, bit]) == list(range(trellis.num_states))


@pytest.mark.parametrize("trellis", [lte_trellis(), turbo757_trellis()])
def test_prev_transitions_invert_next_state(trellis) -> None:
    for target in range(trellis.num_states):
        expected = sorted(
            (state, bit)
            for state in range(trellis.num_states)
            for bit in (0, 1)
            if trellis.next_state[state, bit] == target
        )
        assert list(trellis.prev_transitions[target]) == expected
        assert len(expected) == 2


@pytest.mark.parametrize("trellis", [lte_trellis(), turbo757_trellis()])
def test_termination_reaches_zero_from_every_state(trellis) -> None:
    for start in range(trellis.num_states):
        state = start
        for _ in range(trellis.memory):
            state = trellis.next_state[state, trellis.termination_input[state]]
        assert state == 0


def test_incoming_edges_point_at_their_state() -> None:
    trellis = lte_trellis()
    incoming = trellis.incoming_edges
    assert incoming.shape == (8, 2)
    for state in range(8):
        for edge in incoming[state]:
            assert trellis.edge_to[edge] == state
    assert sorted(incoming.reshape(-1)) == list(range(16))


@pytest.mark.parametrize(
    "spec",
    [
        RscSpec(memory=3, feedforward=0b1101, feedback=0b1010),  # no constant term
        RscSpec(memory=2, feedforward=0b1101, feedback=0b111),  # degree 3 > m
        RscSpec(memory=0, feedforward=1, feedback=1),
    ],
)
def test_invalid_polynomials_are_rejected(spec: RscSpec) -> None:
    with pytest.raises(ConfigurationError):
        build_trellis(spec)
