"""Learning decoder weights by backpropagating through the unrolled decoder."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from tinyturbo.channel.model import ChannelSpec
from tinyturbo.channel.streams import TRAINING, VALIDATION
from tinyturbo.coding.codec import TurboCode
from tinyturbo.core.errors import ConfigurationError
from tinyturbo.core.models import TrainingConfig
from tinyturbo.decoding.decoder import DecodeConfig, turbo_backward, turbo_decode
from tinyturbo.decoding.siso import SisoAlgorithm, parse_algorithm
from tinyturbo.decoding.weights import WeightSet
from tinyturbo.logging import get_logger, log_progress, log_step
from tinyturbo.simulation.sampling import draw_batch

from .losses import bce_loss_and_grad, mse_teacher_loss_and_grad
from .optim import Adam

LOGGER = get_logger(__name__)

LOSSES = ("bce", "mse")
TRAIN_SCHEMES = ("shared", "positional")

# the training settings type doubles as the trainer's config
TrainConfig = TrainingConfig


@dataclass
class TrainReport:
    weights: WeightSet
    losses: List[float] = field(default_factory=list)
    # (step, ber) pairs; step 0 is the untrained starting point
    validation: List[Tuple[int, float]] = field(default_factory=list)


def validate_training_config(cfg: TrainingConfig) -> None:
    loss = normalize_loss(cfg.loss)
    if cfg.scheme not in TRAIN_SCHEMES:
        raise ConfigurationError(f"training scheme must be one of {TRAIN_SCHEMES}, got {cfg.scheme!r}")
    if cfg.batch_size < 1:
        raise ConfigurationError(f"batch_size must be >= 1, got {cfg.batch_size}")
    if cfg.steps < 1:
        raise ConfigurationError(f"steps must be >= 1, got {cfg.steps}")
    if cfg.learning_rate < 0:
        raise ConfigurationError(f"learning_rate must be >= 0, got {cfg.learning_rate}")
    if cfg.validation_interval < 1 or cfg.log_interval < 1:
        raise ConfigurationError("validation_interval and log_interval must be >= 1")
    if cfg.channel_kind not in ("awgn", "bursty"):
        raise ConfigurationError(f"training channel must be awgn or bursty, got {cfg.channel_kind!r}")
    parse_algorithm(cfg.base_algorithm)
    if loss not in LOSSES:
        raise ConfigurationError(f"loss must be one of {LOSSES}")


def normalize_loss(name: str) -> str:
    key = str(name).strip().lower()
    return "mse" if key in ("mse", "mse_to_teacher", "mse_teacher") else key


def _channel(cfg: TrainingConfig, snr_db: float) -> ChannelSpec:
    return ChannelSpec(kind=cfg.channel_kind, snr_db=snr_db, sigma_b=cfg.sigma_b, rho=cfg.rho)


def _initial_decoder(code: TurboCode, cfg: TrainingConfig, template: Optional[DecodeConfig]) -> DecodeConfig:
    iterations = template.iterations if template else cfg.iterations
    algorithm = template.algorithm if template else parse_algorithm(cfg.base_algorithm)
    if template is not None and template.weights.scheme == cfg.scheme:
        weights = template.weights
    else:
        weights = WeightSet.ones(iterations, cfg.scheme, K=code.K)
    return DecodeConfig(iterations, algorithm, weights)


def validation_ber(
    code: TurboCode,
    decoder: DecodeConfig,
    spec: ChannelSpec,
    *,
    seed: int,
    frames: int,
    chunk: int = 1000,
) -> float:
    """BER over a fixed validation set; every call sees the same frames."""

    errors = 0
    done = 0
    while done < frames:
        count = min(chunk, frames - done)
        batch = draw_batch(code, spec, seed=seed, stream=VALIDATION, start=done, count=count)
        bits = turbo_decode(code, batch.llr, decoder).bits
        errors += int(np.count_nonzero(bits != batch.messages))
        done += count
    return errors / (frames * code.K)


def loss_and_weight_grad(
    code: TurboCode,
    decoder: DecodeConfig,
    batch,
    loss: str,
) -> Tuple[float, np.ndarray]:
    """One forward/backward pass over a drawn batch."""

    result = turbo_decode(code, batch.llr, decoder, record=True)
    if loss == "bce":
        value, upstream = bce_loss_and_grad(result.posterior, batch.messages)
    else:
        teacher = DecodeConfig.classical(decoder.iterations, SisoAlgorithm.MAP)
        target = turbo_decode(code, batch.llr, teacher).posterior
        value, upstream = mse_teacher_loss_and_grad(result.posterior, target)
    return value, turbo_backward(result.tape, upstream)


def train(
    code: TurboCode,
    cfg: TrainingConfig,
    template: Optional[DecodeConfig] = None,
) -> TrainReport:
    """Adam on the extrinsic weights with fresh random frames every step.

    ``template`` fixes the iteration count and base algorithm and, when its
    weight scheme matches ``cfg.scheme``, the starting weights; otherwise
    training starts from all ones.
    """

    validate_training_config(cfg)
    loss = normalize_loss(cfg.loss)
    decoder = _initial_decoder(code, cfg, template)
    train_spec = _channel(cfg, cfg.train_snr_db)
    valid_spec = _channel(cfg, cfg.validation_snr_db)
    optimizer = Adam(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2, epsilon=cfg.epsilon)
    report = TrainReport(weights=decoder.weights)

    log_step(
        LOGGER,
        phase="train",
        step="start",
        extra={
            "code": code.label,
            "loss": loss,
            "scheme": cfg.scheme,
            "algorithm": decoder.algorithm.value,
            "parameters": decoder.weights.num_parameters,
            "channel": train_spec.describe(),
        },
    )

    def _validate(step: int) -> None:
        if cfg.validation_frames <= 0:
            return
        ber = validation_ber(
            code, decoder, valid_spec, seed=cfg.seed, frames=cfg.validation_frames, chunk=cfg.batch_size
        )
        report.validation.append((step, ber))

    _validate(0)
    for step in range(cfg.steps):
        batch = draw_batch(
            code, train_spec, seed=cfg.seed, stream=TRAINING, start=step * cfg.batch_size, count=cfg.batch_size
        )
        value, grad = loss_and_weight_grad(code, decoder, batch, loss)
        decoder = decoder.with_weights(decoder.weights.with_values(optimizer.step(decoder.weights.values, grad)))
        report.losses.append(value)

        done = step + 1
        if done % cfg.validation_interval == 0 or done == cfg.steps:
            _validate(done)
        if done % cfg.log_interval == 0 or done == cfg.steps:
            extra = {"loss": value}
            if report.validation:
                extra["validation_ber"] = report.validation[-1][1]
            log_progress(LOGGER, phase="train", step="adam", current=done, total=cfg.steps, extra=extra)

    report.weights = decoder.weights
    log_step(
        LOGGER,
        phase="train",
        step="complete",
        extra={"final_loss": report.losses[-1], "validation": report.validation[-1:] or None},
    )
    return report
