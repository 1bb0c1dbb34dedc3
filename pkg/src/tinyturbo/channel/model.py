"""BPSK over AWGN and bursty channels, and matched-AWGN LLR demapping.

Bit 0 maps to -1 and bit 1 to +1, so a positive channel LLR is evidence for
bit 1. Noise is per coded symbol with ``sigma = 10 ** (-snr_db / 20)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from tinyturbo.core.errors import ConfigurationError, ContractError

CHANNEL_KINDS = ("awgn", "bursty", "deterministic_burst")


@dataclass(frozen=True)
class ChannelSpec:
    """A channel at one SNR point.

    ``bursty`` adds ``N(0, sigma_b^2)`` to each symbol with probability
    ``rho``; ``deterministic_burst`` adds ``burst_amplitude`` to the single
    symbol at ``burst_position``.
    """

    kind: str = "awgn"
    snr_db: float = 0.0
    sigma_b: float = 5.0
    rho: float = 0.01
    burst_position: int = 56
    burst_amplitude: float = 10.0

    def __post_init__(self) -> None:
        if self.kind not in CHANNEL_KINDS:
            raise ConfigurationError(f"unknown channel kind {self.kind!r} (known: {CHANNEL_KINDS})")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigurationError(f"rho must lie in [0, 1], got {self.rho}")
        if self.sigma_b < 0.0:
            raise ConfigurationError(f"sigma_b must be >= 0, got {self.sigma_b}")

    @property
    def sigma(self) -> float:
        return snr_to_sigma(self.snr_db)

    def describe(self) -> dict:
        payload = {"kind": self.kind, "snr_db": self.snr_db}
        if self.kind == "bursty":
            payload.update(sigma_b=self.sigma_b, rho=self.rho)
        if self.kind == "deterministic_burst":
            payload.update(burst_position=self.burst_position, burst_amplitude=self.burst_amplitude)
        return payload


def snr_to_sigma(snr_db: float) -> float:
    return float(10.0 ** (-snr_db / 20.0))


def bpsk(bits: np.ndarray) -> np.ndarray:
    return 2.0 * np.asarray(bits, dtype=np.float64) - 1.0


def transmit(
    symbols: np.ndarray,
    spec: ChannelSpec,
    rng: np.random.Generator,
    *,
    sigma: Optional[float] = None,
) -> np.ndarray:
    """Return ``y = x + z`` (plus the burst term of bursty kinds).

    Draw order is fixed: Gaussian noise, then burst occurrences, then burst
    amplitudes, so a given generator state always yields the same frame.
    """

    x = np.asarray(symbols, dtype=np.float64)
    sigma = spec.sigma if sigma is None else sigma
    y = x + sigma * rng.standard_normal(x.shape)
    if spec.kind == "bursty":
        hits = rng.random(x.shape) < spec.rho
        y = y + hits * (spec.sigma_b * rng.standard_normal(x.shape))
    elif spec.kind == "deterministic_burst":
        if not 0 <= spec.burst_position < x.shape[-1]:
            raise ContractError(
                f"burst position {spec.burst_position} outside frame of {x.shape[-1]} symbols"
            )
        y = y.copy()
        y[..., spec.burst_position] += spec.burst_amplitude
    return y


def demap(received: np.ndarray, sigma: float) -> np.ndarray:
    """AWGN channel LLR ``2 y / sigma^2``, also used (mismatched) on bursty channels."""

    if sigma <= 0.0:
        raise ContractError(f"sigma must be > 0, got {sigma}")
    return 2.0 * np.asarray(received, dtype=np.float64) / (sigma * sigma)
