"""Recursive systematic convolutional (RSC) constituent codes and their trellises.

Polynomials are bitmasks where bit ``i`` is the coefficient of ``D^i``, so
``1 + D^2 + D^3`` is ``0b1101``. The encoder register holds the last ``m``
feedback bits; state bit ``j - 1`` is the feedback bit delayed by ``j`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from tinyturbo.core.errors import ConfigurationError


@dataclass(frozen=True)
class RscSpec:
    """Generator ``(1, feedforward / feedback)`` of an RSC code with memory ``m``."""

    memory: int
    feedforward: int
    feedback: int

    def validate(self) -> None:
        if self.memory < 1:
            raise ConfigurationError(f"RSC memory must be >= 1, got {self.memory}")
        limit = 1 << (self.memory + 1)
        for name, mask in (("feedforward", self.feedforward), ("feedback", self.feedback)):
            if mask < 0 or mask >= limit:
                raise ConfigurationError(
                    f"{name} polynomial {mask:#o} has degree above memory {self.memory}"
                )
        if not self.feedback & 1:
            raise ConfigurationError(
                f"feedback polynomial {self.feedback:#o} must have a constant term"
            )


@dataclass(frozen=True)
class Trellis:
    """Dense transition tables of an RSC code.

    ``prev_transitions[s]`` lists the two ``(predecessor, input)`` pairs that
    enter state ``s``. ``termination_input[s]`` is the input that makes the
    feedback bit zero, so ``m`` such steps reach state 0 from anywhere.
    """

    spec: RscSpec
    num_states: int
    next_state: np.ndarray
    parity_out: np.ndarray
    prev_transitions: Tuple[Tuple[Tuple[int, int], ...], ...]
    termination_input: np.ndarray

    @property
    def memory(self) -> int:
        return self.spec.memory

    @property
    def edge_from(self) -> np.ndarray:
        """Source state of edge ``e = 2 * state + input``."""
        return np.repeat(np.arange(self.num_states), 2)

    @property
    def edge_input(self) -> np.ndarray:
        return np.tile(np.array([0, 1]), self.num_states)

    @property
    def edge_to(self) -> np.ndarray:
        return self.next_state.reshape(-1)

    @property
    def edge_parity(self) -> np.ndarray:
        return self.parity_out.reshape(-1)

    @property
    def incoming_edges(self) -> np.ndarray:
        """``(num_states, 2)`` edge indices entering each state."""
        return np.array(
            [[2 * prev + u for prev, u in self.prev_transitions[s]] for s in range(self.num_states)],
            dtype=np.int64,
        )

    def step(self, state: int, bit: int) -> Tuple[int, int]:
        return int(self.next_state[state, bit]), int(self.parity_out[state, bit])


def _parity(value: int) -> int:
    return bin(value).count("1") & 1


def build_trellis(spec: RscSpec) -> Trellis:
    """Tabulate the state machine of ``spec`` for every (state, input) pair."""

    spec.validate()
    m = spec.memory
    num_states = 1 << m
    state_mask = num_states - 1
    # taps on the register, i.e. coefficients of D^1..D^m
    feedback_taps = spec.feedback >> 1
    feedforward_taps = spec.feedforward >> 1
    feedforward_zero = spec.feedforward & 1

    next_state = np.zeros((num_states, 2), dtype=np.int64)
    parity_out = np.zeros((num_states, 2), dtype=np.int64)
    termination_input = np.zeros(num_states, dtype=np.int64)
    incoming: list[list[Tuple[int, int]]] = [[] for _ in range(num_states)]

    for state in range(num_states):
        recursion = _parity(state & feedback_taps)
        termination_input[state] = recursion
        for bit in (0, 1):
            feedback_bit = bit ^ recursion
            parity = (feedforward_zero & feedback_bit) ^ _parity(state & feedforward_taps)
            target = ((state << 1) | feedback_bit) & state_mask
            next_state[state, bit] = target
            parity_out[state, bit] = parity
            incoming[target].append((state, bit))

    for state, entries in enumerate(incoming):
        if len(entries) != 2:
            raise ConfigurationError(
                f"state {state} has {len(entries)} incoming transitions; expected 2"
            )

    return Trellis(
        spec=spec,
        num_states=num_states,
        next_state=next_state,
        parity_out=parity_out,
        prev_transitions=tuple(tuple(sorted(entries)) for entries in incoming),
        termination_input=termination_input,
    )


LTE_RSC = RscSpec(memory=3, feedforward=0b1101, feedback=0b1011)
TURBO757_RSC = RscSpec(memory=2, feedforward=0b101, feedback=0b111)


def lte_trellis() -> Trellis:
    """LTE constituent code, ``g1 = 1 + D^2 + D^3`` over ``g2 = 1 + D + D^3``."""
    return build_trellis(LTE_RSC)


def turbo757_trellis() -> Trellis:
    """Turbo-757 constituent code, ``1 + D^2`` over ``1 + D + D^2``."""
    return build_trellis(TURBO757_RSC)


NAMED_TRELLISES = {
    "lte": lte_trellis,
    "turbo757": turbo757_trellis,
}
