"""Quadratic permutation polynomial (QPP) interleavers.

Interleaving reads addresses: ``out[i] = seq[forward[i]]`` (the 36.212
convention). Deinterleaving reads through ``inverse``. Both accept batches
with the permuted axis last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from tinyturbo.core.errors import ConfigurationError, ContractError, UnsupportedBlocklengthError

# (f1, f2) from 3GPP TS 36.212 Table 5.1.3-3 for the blocklengths shipped here.
LTE_QPP_TABLE: Dict[int, Tuple[int, int]] = {
    40: (3, 10),
    48: (7, 12),
    56: (19, 42),
    64: (7, 16),
    72: (7, 18),
    80: (11, 20),
    88: (5, 22),
    96: (11, 24),
    104: (7, 26),
    112: (41, 84),
    120: (103, 90),
    128: (15, 32),
    136: (9, 34),
    144: (17, 108),
    152: (9, 38),
    160: (21, 120),
    168: (101, 84),
    176: (21, 44),
    184: (57, 46),
    192: (23, 48),
    200: (13, 50),
    208: (27, 52),
    216: (11, 36),
    224: (27, 56),
    232: (85, 58),
    240: (29, 60),
    248: (33, 62),
    256: (15, 32),
    512: (31, 64),
    1008: (55, 84),
    1024: (31, 64),
    6144: (263, 480),
}


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., size - 1}`` with its inverse table."""

    forward: np.ndarray
    inverse: np.ndarray

    @property
    def size(self) -> int:
        return int(self.forward.shape[0])

    @classmethod
    def from_forward(cls, forward: np.ndarray) -> "Permutation":
        forward = np.array(forward, dtype=np.int64)
        size = forward.shape[0]
        if forward.ndim != 1 or np.any(forward < 0) or np.any(forward >= size):
            raise ConfigurationError("permutation entries must lie in [0, size)")
        if np.unique(forward).shape[0] != size:
            raise ConfigurationError("permutation has duplicate entries")
        inverse = np.empty_like(forward)
        inverse[forward] = np.arange(size, dtype=np.int64)
        forward.setflags(write=False)
        inverse.setflags(write=False)
        return cls(forward=forward, inverse=inverse)

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls.from_forward(np.arange(size, dtype=np.int64))


def qpp(K: int, f1: int, f2: int) -> Permutation:
    """Build ``pi(i) = (f1 * i + f2 * i^2) mod K``; raises if it is not a bijection."""

    if K < 1:
        raise ConfigurationError(f"interleaver size must be >= 1, got {K}")
    index = np.arange(K, dtype=np.int64)
    # reduce i^2 first so the products stay far from int64 overflow
    square = (index * index) % K
    forward = ((f1 % K) * index + (f2 % K) * square) % K
    try:
        return Permutation.from_forward(forward)
    except ConfigurationError as exc:
        raise ConfigurationError(f"QPP ({K}, f1={f1}, f2={f2}) is not a permutation: {exc}") from exc


def lte_qpp_params(K: int) -> Tuple[int, int]:
    try:
        return LTE_QPP_TABLE[K]
    except KeyError:
        supported = ", ".join(str(size) for size in sorted(LTE_QPP_TABLE))
        raise UnsupportedBlocklengthError(
            f"no embedded QPP parameters for K={K}; supported sizes: {supported}"
        ) from None


def lte_qpp(K: int) -> Permutation:
    f1, f2 = lte_qpp_params(K)
    return qpp(K, f1, f2)


def _check_length(p: Permutation, seq: np.ndarray) -> np.ndarray:
    arr = np.asarray(seq)
    if arr.ndim == 0 or arr.shape[-1] != p.size:
        raise ContractError(
            f"sequence length {arr.shape[-1] if arr.ndim else 0} does not match interleaver size {p.size}"
        )
    return arr


def apply(p: Permutation, seq: np.ndarray) -> np.ndarray:
    return _check_length(p, seq)[..., p.forward]


def apply_inverse(p: Permutation, seq: np.ndarray) -> np.ndarray:
    return _check_length(p, seq)[..., p.inverse]
