"""Iterative turbo decoding with weighted extrinsic exchange."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from tinyturbo.channel.frames import LlrFrame
from tinyturbo.coding.codec import TurboCode
from tinyturbo.coding.interleave import apply, apply_inverse
from tinyturbo.core.errors import ConfigurationError, ContractError

from .siso import SisoAlgorithm, SisoInput, SisoWorkspace, parse_algorithm, siso_backward, siso_decode
from .weights import WeightSet


@dataclass(frozen=True)
class DecodeConfig:
    iterations: int
    algorithm: SisoAlgorithm
    weights: WeightSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", parse_algorithm(self.algorithm))
        if self.iterations < 1:
            raise ConfigurationError(f"iterations must be >= 1, got {self.iterations}")
        if self.weights.iterations != self.iterations:
            raise ConfigurationError(
                f"weight set has {self.weights.iterations} iterations, decoder runs {self.iterations}"
            )

    @classmethod
    def classical(cls, iterations: int, algorithm=SisoAlgorithm.MAP) -> "DecodeConfig":
        return cls(iterations, parse_algorithm(algorithm), WeightSet.classical(iterations))

    def truncate(self, iterations: int) -> "DecodeConfig":
        return DecodeConfig(iterations, self.algorithm, self.weights.truncate(iterations))

    def with_weights(self, weights: WeightSet) -> "DecodeConfig":
        return DecodeConfig(self.iterations, self.algorithm, weights)

    @property
    def label(self) -> str:
        return f"{self.weights.scheme}-{self.algorithm.value}-{self.iterations}"


@dataclass
class _IterationTape:
    prior1: np.ndarray
    post1: np.ndarray
    ws1: SisoWorkspace
    prior2: np.ndarray
    post2: np.ndarray
    ws2: SisoWorkspace


@dataclass
class DecodeTape:
    """What :func:`turbo_backward` needs to differentiate one decode."""

    code: TurboCode
    config: DecodeConfig
    sys: np.ndarray
    sys_interleaved: np.ndarray
    iterations: List[_IterationTape] = field(default_factory=list)


@dataclass
class DecodeResult:
    bits: np.ndarray
    posterior: np.ndarray
    trajectory: np.ndarray
    tape: Optional[DecodeTape] = None


def weighted_extrinsic(posterior, sys_llr, prior, w) -> np.ndarray:
    """``w1 * posterior - w2 * sys_llr - w3 * prior``; each weight is a scalar or per-position vector."""

    posterior = np.asarray(posterior, dtype=np.float64)
    sys_llr = np.asarray(sys_llr, dtype=np.float64)
    prior = np.asarray(prior, dtype=np.float64)
    if not (posterior.shape == sys_llr.shape == prior.shape):
        raise ContractError(
            f"posterior/sys/prior shapes differ: {posterior.shape}, {sys_llr.shape}, {prior.shape}"
        )
    w1, w2, w3 = w
    for weight in (w1, w2, w3):
        if np.ndim(weight) and np.shape(weight)[-1] != posterior.shape[-1]:
            raise ContractError(
                f"per-position weight length {np.shape(weight)[-1]} does not match {posterior.shape[-1]}"
            )
    return w1 * posterior - w2 * sys_llr - w3 * prior


def _check(code: TurboCode, frame: LlrFrame, cfg: DecodeConfig) -> None:
    if frame.K != code.K:
        raise ContractError(f"frame carries K={frame.K}, code has K={code.K}")
    if frame.memory != code.memory:
        raise ContractError(f"frame tail length {frame.memory} does not match memory {code.memory}")
    if cfg.weights.K is not None and cfg.weights.K != code.K:
        raise ConfigurationError(f"positional weights are for K={cfg.weights.K}, code has K={code.K}")


def turbo_decode(
    code: TurboCode,
    frame: LlrFrame,
    cfg: DecodeConfig,
    *,
    record: bool = False,
) -> DecodeResult:
    """Run ``cfg.iterations`` rounds of D1 then D2.

    ``trajectory[i]`` is the deinterleaved D2 posterior after iteration ``i``;
    the last entry is the returned posterior. With ``record=True`` the result
    carries a tape for :func:`turbo_backward`.
    """

    _check(code, frame, cfg)
    pi = code.interleaver
    sys = frame.sys
    sys_pi = apply(pi, sys)
    batch = frame.batch_size
    tape = DecodeTape(code=code, config=cfg, sys=sys, sys_interleaved=sys_pi) if record else None

    ext2 = np.zeros((batch, code.K))
    trajectory = np.empty((cfg.iterations, batch, code.K))
    for i in range(cfg.iterations):
        prior1 = np.zeros_like(ext2) if i == 0 else apply_inverse(pi, ext2)
        post1, _, ws1 = siso_decode(
            code.trellis,
            SisoInput(sys, frame.par1, prior1, frame.tail_sys1, frame.tail_par1),
            cfg.algorithm,
            record=record,
        )
        ext1 = weighted_extrinsic(post1, sys, prior1, cfg.weights.half(i, 0))

        prior2 = apply(pi, ext1)
        post2, _, ws2 = siso_decode(
            code.trellis,
            SisoInput(sys_pi, frame.par2, prior2, frame.tail_sys2, frame.tail_par2),
            cfg.algorithm,
            record=record,
        )
        ext2 = weighted_extrinsic(post2, sys_pi, prior2, cfg.weights.half(i, 1))
        trajectory[i] = apply_inverse(pi, post2)
        if tape is not None:
            tape.iterations.append(_IterationTape(prior1, post1, ws1, prior2, post2, ws2))

    posterior = trajectory[-1]
    return DecodeResult(
        bits=(posterior > 0).astype(np.int64),
        posterior=posterior,
        trajectory=trajectory,
        tape=tape,
    )


def _weight_grad(upstream: np.ndarray, term: np.ndarray, positional: bool):
    product = upstream * term
    return product.sum(axis=0) if positional else product.sum()


def turbo_backward(tape: DecodeTape, grad_posterior: np.ndarray) -> np.ndarray:
    """Gradient of ``sum(grad_posterior * posterior)`` with respect to the weight values.

    The result has the shape of ``tape.config.weights.values``.
    """

    if not tape.iterations:
        raise ContractError("turbo_backward needs a decode recorded with record=True")
    weights = tape.config.weights
    pi = tape.code.interleaver
    upstream = np.atleast_2d(np.asarray(grad_posterior, dtype=np.float64))
    if upstream.shape != tape.sys.shape:
        raise ContractError(f"upstream gradient shape {upstream.shape} does not match {tape.sys.shape}")
    positional = weights.scheme == "positional"
    grad = np.zeros(weights.values.shape)

    g_post2 = apply(pi, upstream)
    g_ext2 = np.zeros_like(upstream)
    for i in range(len(tape.iterations) - 1, -1, -1):
        rec = tape.iterations[i]

        b1, _, b3 = weights.half(i, 1)
        grad[i, 3] += _weight_grad(g_ext2, rec.post2, positional)
        grad[i, 4] -= _weight_grad(g_ext2, tape.sys_interleaved, positional)
        grad[i, 5] -= _weight_grad(g_ext2, rec.prior2, positional)
        d2 = siso_backward(rec.ws2, grad_posterior=g_post2 + b1 * g_ext2)
        g_ext1 = apply_inverse(pi, d2.prior - b3 * g_ext2)

        a1, _, a3 = weights.half(i, 0)
        grad[i, 0] += _weight_grad(g_ext1, rec.post1, positional)
        grad[i, 1] -= _weight_grad(g_ext1, tape.sys, positional)
        grad[i, 2] -= _weight_grad(g_ext1, rec.prior1, positional)
        d1 = siso_backward(rec.ws1, grad_posterior=a1 * g_ext1)
        # prior1 of iteration i is the deinterleaved ext2 of iteration i - 1
        g_ext2 = apply(pi, d1.prior - a3 * g_ext1)
        g_post2 = np.zeros_like(upstream)
    return grad
