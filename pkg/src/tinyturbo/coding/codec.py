"""Turbo encoding, puncturing and the serialized frame layout.

Serialized order: triplets ``(s_k, p1_k, p2_k)`` for ``k = 0..K-1`` with
punctured parities omitted, then the ``m`` (systematic, parity) tail pairs of
encoder 1, then those of encoder 2. Tails are never punctured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from tinyturbo.channel.frames import LlrFrame
from tinyturbo.channel.model import bpsk
from tinyturbo.core.errors import ConfigurationError, ContractError

from .interleave import Permutation, apply, lte_qpp, qpp
from .trellis import NAMED_TRELLISES, RscSpec, Trellis, build_trellis


@dataclass(frozen=True)
class PuncturePattern:
    """Periodic keep masks for the two parity streams (1 = transmitted)."""

    name: str
    parity1: Tuple[int, ...]
    parity2: Tuple[int, ...]

    def __post_init__(self) -> None:
        for label, mask in (("parity1", self.parity1), ("parity2", self.parity2)):
            if not mask or any(bit not in (0, 1) for bit in mask):
                raise ConfigurationError(f"{label} puncture mask must be a non-empty 0/1 sequence")

    def keep(self, K: int) -> Tuple[np.ndarray, np.ndarray]:
        index = np.arange(K)
        p1 = np.asarray(self.parity1, dtype=bool)[index % len(self.parity1)]
        p2 = np.asarray(self.parity2, dtype=bool)[index % len(self.parity2)]
        return p1, p2


NO_PUNCTURE = PuncturePattern("none", (1,), (1,))
# p1 on even k, p2 on odd k
RATE_HALF = PuncturePattern("rate_half", (1, 0), (0, 1))
NAMED_PUNCTURES = {"none": NO_PUNCTURE, "rate_half": RATE_HALF}


@dataclass(frozen=True)
class FrameLayout:
    """Serialized position of every logical value; ``-1`` marks a punctured value."""

    sys: np.ndarray
    par1: np.ndarray
    par2: np.ndarray
    tail_sys1: np.ndarray
    tail_par1: np.ndarray
    tail_sys2: np.ndarray
    tail_par2: np.ndarray
    length: int

    def streams(self) -> Dict[str, np.ndarray]:
        return {
            "sys": self.sys,
            "par1": self.par1,
            "par2": self.par2,
            "tail_sys1": self.tail_sys1,
            "tail_par1": self.tail_par1,
            "tail_sys2": self.tail_sys2,
            "tail_par2": self.tail_par2,
        }


@dataclass(frozen=True)
class TurboCode:
    K: int
    trellis: Trellis
    interleaver: Permutation
    puncture: PuncturePattern = NO_PUNCTURE
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ConfigurationError(f"K must be >= 1, got {self.K}")
        if self.interleaver.size != self.K:
            raise ConfigurationError(
                f"interleaver size {self.interleaver.size} does not match K={self.K}"
            )

    @property
    def memory(self) -> int:
        return self.trellis.memory

    @property
    def N(self) -> int:
        return layout(self).length

    @property
    def label(self) -> str:
        return self.name or f"Turbo({self.K},{self.N})"


@dataclass
class CodedFrame:
    """Coded bits of a batch of messages, arrays shaped ``(batch, length)``."""

    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    tail_sys1: np.ndarray
    tail_par1: np.ndarray
    tail_sys2: np.ndarray
    tail_par2: np.ndarray
    final_state1: np.ndarray
    final_state2: np.ndarray

    @property
    def tail1(self) -> np.ndarray:
        """Tail pairs of encoder 1 flattened as ``(s, p, s, p, ...)``."""
        return np.stack([self.tail_sys1, self.tail_par1], axis=-1).reshape(self.tail_sys1.shape[0], -1)

    @property
    def tail2(self) -> np.ndarray:
        return np.stack([self.tail_sys2, self.tail_par2], axis=-1).reshape(self.tail_sys2.shape[0], -1)


def make_code(
    K: int,
    *,
    trellis: Union[str, RscSpec, Trellis] = "lte",
    f1: Optional[int] = None,
    f2: Optional[int] = None,
    puncture: Union[str, PuncturePattern] = "none",
) -> TurboCode:
    """Assemble a code; without ``(f1, f2)`` the LTE QPP table is consulted."""

    if isinstance(trellis, str):
        try:
            resolved = NAMED_TRELLISES[trellis]()
        except KeyError:
            raise ConfigurationError(
                f"unknown trellis {trellis!r} (known: {sorted(NAMED_TRELLISES)})"
            ) from None
    elif isinstance(trellis, RscSpec):
        resolved = build_trellis(trellis)
    else:
        resolved = trellis
    if (f1 is None) != (f2 is None):
        raise ConfigurationError("interleaver needs both f1 and f2")
    interleaver = lte_qpp(K) if f1 is None else qpp(K, int(f1), int(f2))
    if isinstance(puncture, str):
        try:
            pattern = NAMED_PUNCTURES[puncture]
        except KeyError:
            raise ConfigurationError(
                f"unknown puncture pattern {puncture!r} (known: {sorted(NAMED_PUNCTURES)})"
            ) from None
    else:
        pattern = puncture
    return TurboCode(K=K, trellis=resolved, interleaver=interleaver, puncture=pattern)


def rsc_encode(trellis: Trellis, bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Encode ``(batch, K)`` bits from state 0 and terminate with ``m`` forced steps.

    Returns ``(parity, tail_sys, tail_par, final_state)``.
    """

    bits = np.asarray(bits, dtype=np.int64)
    batch, K = bits.shape
    state = np.zeros(batch, dtype=np.int64)
    parity = np.empty((batch, K), dtype=np.int64)
    for k in range(K):
        u = bits[:, k]
        parity[:, k] = trellis.parity_out[state, u]
        state = trellis.next_state[state, u]
    m = trellis.memory
    tail_sys = np.empty((batch, m), dtype=np.int64)
    tail_par = np.empty((batch, m), dtype=np.int64)
    for j in range(m):
        u = trellis.termination_input[state]
        tail_sys[:, j] = u
        tail_par[:, j] = trellis.parity_out[state, u]
        state = trellis.next_state[state, u]
    return parity, tail_sys, tail_par, state


def _as_batch(message: np.ndarray, K: int) -> np.ndarray:
    bits = np.atleast_2d(np.asarray(message, dtype=np.int64))
    if bits.ndim != 2 or bits.shape[1] != K:
        raise ContractError(f"message length {bits.shape[-1]} does not match K={K}")
    if np.any((bits != 0) & (bits != 1)):
        raise ContractError("message must contain only 0/1 bits")
    return bits


def encode(code: TurboCode, message: np.ndarray) -> CodedFrame:
    bits = _as_batch(message, code.K)
    parity1, tail_sys1, tail_par1, state1 = rsc_encode(code.trellis, bits)
    parity2, tail_sys2, tail_par2, state2 = rsc_encode(code.trellis, apply(code.interleaver, bits))
    return CodedFrame(
        systematic=bits.copy(),
        parity1=parity1,
        parity2=parity2,
        tail_sys1=tail_sys1,
        tail_par1=tail_par1,
        tail_sys2=tail_sys2,
        tail_par2=tail_par2,
        final_state1=state1,
        final_state2=state2,
    )


def layout(code: TurboCode) -> FrameLayout:
    K, m = code.K, code.memory
    keep1, keep2 = code.puncture.keep(K)
    sys_pos = np.empty(K, dtype=np.int64)
    par1_pos = np.full(K, -1, dtype=np.int64)
    par2_pos = np.full(K, -1, dtype=np.int64)
    cursor = 0
    for k in range(K):
        sys_pos[k] = cursor
        cursor += 1
        if keep1[k]:
            par1_pos[k] = cursor
            cursor += 1
        if keep2[k]:
            par2_pos[k] = cursor
            cursor += 1
    tails = []
    for _ in range(2):
        start = cursor + 2 * np.arange(m, dtype=np.int64)
        tails.extend([start, start + 1])
        cursor += 2 * m
    return FrameLayout(
        sys=sys_pos,
        par1=par1_pos,
        par2=par2_pos,
        tail_sys1=tails[0],
        tail_par1=tails[1],
        tail_sys2=tails[2],
        tail_par2=tails[3],
        length=cursor,
    )


def multiplex(code: TurboCode, frame: CodedFrame) -> np.ndarray:
    """Serialized coded bits, shape ``(batch, N)``."""

    plan = layout(code)
    batch = frame.systematic.shape[0]
    out = np.zeros((batch, plan.length), dtype=np.int64)
    values = {
        "sys": frame.systematic,
        "par1": frame.parity1,
        "par2": frame.parity2,
        "tail_sys1": frame.tail_sys1,
        "tail_par1": frame.tail_par1,
        "tail_sys2": frame.tail_sys2,
        "tail_par2": frame.tail_par2,
    }
    for name, positions in plan.streams().items():
        kept = positions >= 0
        out[:, positions[kept]] = values[name][:, kept]
    return out


def serialize(code: TurboCode, frame: CodedFrame) -> np.ndarray:
    """BPSK symbols (bit 0 -> -1, bit 1 -> +1) in serialized order."""
    return bpsk(multiplex(code, frame))


def depuncture(code: TurboCode, received: np.ndarray) -> LlrFrame:
    """Scatter serialized LLRs back into streams; punctured positions get LLR 0."""

    plan = layout(code)
    llr = np.atleast_2d(np.asarray(received, dtype=np.float64))
    if llr.ndim != 2 or llr.shape[1] != plan.length:
        raise ContractError(f"received length {llr.shape[-1]} does not match N={plan.length}")
    streams = {}
    for name, positions in plan.streams().items():
        kept = positions >= 0
        values = np.zeros((llr.shape[0], positions.shape[0]), dtype=np.float64)
        values[:, kept] = llr[:, positions[kept]]
        streams[name] = values
    return LlrFrame(**streams)
