"""Frame generation: message, encode, transmit, demap, depuncture."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tinyturbo.channel.frames import LlrFrame
from tinyturbo.channel.model import ChannelSpec, demap, transmit
from tinyturbo.channel.streams import frame_rng
from tinyturbo.coding.codec import TurboCode, depuncture, encode, serialize


@dataclass
class FrameBatch:
    messages: np.ndarray
    received: np.ndarray
    llr: LlrFrame


def draw_batch(
    code: TurboCode,
    spec: ChannelSpec,
    *,
    seed: int,
    stream: int,
    start: int,
    count: int,
    all_zero: bool = False,
) -> FrameBatch:
    """Frames ``start .. start + count - 1`` of a stream.

    Frame ``j`` depends only on ``(seed, stream, j)``: its message bits come
    first from its generator, then its channel noise.
    """

    rngs = [frame_rng(seed, stream, start + j) for j in range(count)]
    if all_zero:
        messages = np.zeros((count, code.K), dtype=np.int64)
    else:
        messages = np.stack([rng.integers(0, 2, size=code.K) for rng in rngs]).astype(np.int64)
    symbols = serialize(code, encode(code, messages))
    received = np.stack([transmit(symbols[j], spec, rngs[j]) for j in range(count)])
    llr = depuncture(code, demap(received, spec.sigma))
    return FrameBatch(messages=messages, received=received, llr=llr)
