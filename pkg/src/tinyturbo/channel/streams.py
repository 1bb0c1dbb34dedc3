"""Counter-based random streams.

Every frame gets its own Philox generator keyed by (seed, stream, index), so a
frame's message and noise never depend on how work is split across workers.
"""

from __future__ import annotations

import numpy as np

from tinyturbo.core.errors import ConfigurationError

_MASK64 = (1 << 64) - 1

# stream identifiers
SIMULATION = 1
TRAINING = 2
VALIDATION = 3
ANALYSIS = 4

# SNR points per sweep that get their own stream
MAX_GRID_POINTS = 256


def frame_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    counter = ((stream & 0xFFFF) << 48) | (index & ((1 << 48) - 1))
    key = (seed & _MASK64) | (counter << 64)
    return np.random.Generator(np.random.Philox(key=key))


def point_stream(base: int, point: int) -> int:
    """Distinct stream id per SNR point of a sweep."""
    if not 0 <= point < MAX_GRID_POINTS:
        raise ConfigurationError(f"SNR grid index {point} outside 0..{MAX_GRID_POINTS - 1}")
    return (base << 8) | point
