"""Dataclasses describing tinyturbo experiment configuration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

# A trellis is named ("lte", "turbo757") or given as (memory, feedforward, feedback).
TrellisChoice = Union[str, Tuple[int, int, int]]
# A puncture pattern is named ("none", "rate_half") or given as periodic keep masks.
PunctureChoice = Union[str, Tuple[Tuple[int, ...], Tuple[int, ...]]]


@dataclass
class CodeConfig:
    """Turbo code definition: blocklength, constituent trellis, interleaver, puncturing."""

    K: int = 40
    trellis: TrellisChoice = "lte"
    f1: Optional[int] = None
    f2: Optional[int] = None
    puncture: PunctureChoice = "none"


@dataclass
class ChannelConfig:
    """Channel model and the SNR grid it is evaluated on."""

    kind: str = "awgn"
    snr_db: Tuple[float, ...] = (0.0,)
    sigma_b: float = 5.0
    rho: float = 0.01
    burst_position: int = 56
    burst_amplitude: float = 10.0


@dataclass
class DecoderConfig:
    """Iterative decoder settings; ``weights`` is classical, tinyturbo or a JSON path."""

    iterations: int = 3
    algorithm: str = "max_log_map"
    weights: str = "classical"


@dataclass
class SimulationConfig:
    """Monte-Carlo stop rule and chunking."""

    seed: int = 0
    # frames per chunk; fixed so tallies do not depend on the worker count
    batch_size: int = 1000
    min_frames: int = 0
    max_frames: int = 200_000
    min_block_errors: Optional[int] = 100
    workers: int = 1


@dataclass
class TrainingConfig:
    """Weight training settings; defaults follow the published training recipe."""

    loss: str = "bce"
    learning_rate: float = 0.0008
    batch_size: int = 1000
    train_snr_db: float = -1.0
    steps: int = 5000
    base_algorithm: str = "max_log_map"
    scheme: str = "shared"
    seed: int = 0
    iterations: int = 3
    channel_kind: str = "awgn"
    sigma_b: float = 5.0
    rho: float = 0.01
    validation_snr_db: float = 0.0
    validation_frames: int = 2000
    validation_interval: int = 100
    log_interval: int = 50
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
