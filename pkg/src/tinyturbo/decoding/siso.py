"""BCJR soft-input soft-output decoding of one constituent code.

Everything is in the log domain with ``L(u) = log P(u=1) / P(u=0)``. The
recursions run over ``K + m`` trellis steps; the last ``m`` use the tail
LLRs with a zero prior and emit nothing. ``alpha`` and ``beta`` rows are
shifted by their maximum after every step, which leaves posteriors unchanged.

Edges are numbered ``e = 2 * state + input``, so the outgoing pair of a state
is contiguous and odd edges carry input 1.

The reverse pass (:func:`siso_backward`) differentiates the posterior with
respect to every input. Max nodes route the whole gradient to the first
argmax; log-sum-exp nodes split it with softmax weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from tinyturbo.coding.trellis import Trellis
from tinyturbo.core.errors import ConfigurationError, ContractError


class SisoAlgorithm(str, Enum):
    MAP = "map"
    MAX_LOG_MAP = "max_log_map"


_ALGORITHM_ALIASES = {
    "map": SisoAlgorithm.MAP,
    "log_map": SisoAlgorithm.MAP,
    "max_log_map": SisoAlgorithm.MAX_LOG_MAP,
    "maxlog": SisoAlgorithm.MAX_LOG_MAP,
    "max_log": SisoAlgorithm.MAX_LOG_MAP,
}


def parse_algorithm(value) -> SisoAlgorithm:
    if isinstance(value, SisoAlgorithm):
        return value
    key = str(value).strip().lower().replace("-", "_")
    try:
        return _ALGORITHM_ALIASES[key]
    except KeyError:
        raise ConfigurationError(
            f"unknown SISO algorithm {value!r} (known: {sorted(_ALGORITHM_ALIASES)})"
        ) from None


@dataclass
class SisoInput:
    """LLR inputs of one constituent decoder, arrays shaped ``(batch, length)``."""

    sys_llr: np.ndarray
    par_llr: np.ndarray
    prior: np.ndarray
    tail_sys: np.ndarray
    tail_par: np.ndarray

    def __post_init__(self) -> None:
        for name in ("sys_llr", "par_llr", "prior", "tail_sys", "tail_par"):
            setattr(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=np.float64)))
        if not (self.sys_llr.shape == self.par_llr.shape == self.prior.shape):
            raise ContractError(
                f"sys/par/prior shapes differ: {self.sys_llr.shape}, {self.par_llr.shape}, {self.prior.shape}"
            )
        if self.tail_sys.shape != self.tail_par.shape or self.tail_sys.shape[0] != self.sys_llr.shape[0]:
            raise ContractError("tail LLRs must be (batch, m) and match the batch size")

    @property
    def K(self) -> int:
        return int(self.sys_llr.shape[1])


@dataclass
class SisoWorkspace:
    """Forward/backward state of one decode.

    ``alpha`` and ``beta`` are ``(batch, K + m + 1, num_states)``; ``gamma`` is
    ``(batch, K + m, 2 * num_states)`` indexed by edge.
    """

    trellis: Trellis
    algorithm: SisoAlgorithm
    K: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    recorded: bool = False


class SisoOutput(NamedTuple):
    posterior: np.ndarray
    extrinsic: np.ndarray
    workspace: SisoWorkspace


@dataclass
class SisoGradients:
    sys_llr: np.ndarray
    par_llr: np.ndarray
    prior: np.ndarray
    tail_sys: np.ndarray
    tail_par: np.ndarray


def branch_metric(
    sys_llr: float,
    par_llr: float,
    prior: float,
    x_sys: int,
    x_par: int,
    u: int,
) -> float:
    """``0.5 * (x_s L_sys + x_p L_par) + 0.5 * s(u) L_prior`` with ``s(1) = +1, s(0) = -1``."""
    sign = 1.0 if u else -1.0
    return 0.5 * (x_sys * sys_llr + x_par * par_llr) + 0.5 * sign * prior


def lse(values: Sequence[float]) -> float:
    arr = np.asarray(values, dtype=np.float64)
    peak = float(np.max(arr))
    if peak == -np.inf:
        return -np.inf
    return peak + float(np.log(np.sum(np.exp(arr - peak))))


def max_log(values: Sequence[float]) -> float:
    return float(np.max(np.asarray(values, dtype=np.float64)))


def lse_grad(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    return _reduce_weights(arr[None, :], SisoAlgorithm.MAP)[0]


def max_log_grad(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    return _reduce_weights(arr[None, :], SisoAlgorithm.MAX_LOG_MAP)[0]


def _pair(a: np.ndarray, b: np.ndarray, algorithm: SisoAlgorithm) -> np.ndarray:
    if algorithm is SisoAlgorithm.MAP:
        return np.logaddexp(a, b)
    return np.maximum(a, b)


def _pair_weights(a: np.ndarray, b: np.ndarray, algorithm: SisoAlgorithm):
    if algorithm is SisoAlgorithm.MAP:
        out = np.logaddexp(a, b)
        dead = np.isneginf(out)
        safe = np.where(dead, 0.0, out)
        wa = np.where(dead, 0.0, np.exp(np.where(dead, 0.0, a - safe)))
        wb = np.where(dead, 0.0, np.exp(np.where(dead, 0.0, b - safe)))
        return wa, wb
    wa = (a >= b).astype(np.float64)
    return wa, 1.0 - wa


def _reduce(z: np.ndarray, algorithm: SisoAlgorithm) -> np.ndarray:
    peak = np.max(z, axis=-1)
    if algorithm is SisoAlgorithm.MAX_LOG_MAP:
        return peak
    safe = np.where(np.isneginf(peak), 0.0, peak)
    with np.errstate(divide="ignore"):
        return safe + np.log(np.sum(np.exp(z - safe[..., None]), axis=-1))


def _reduce_weights(z: np.ndarray, algorithm: SisoAlgorithm) -> np.ndarray:
    """Derivative of the reduction over the last axis with respect to each entry."""
    if algorithm is SisoAlgorithm.MAX_LOG_MAP:
        first = np.argmax(z, axis=-1)
        return (np.arange(z.shape[-1]) == first[..., None]).astype(np.float64)
    total = _reduce(z, algorithm)
    dead = np.isneginf(total)
    safe = np.where(dead, 0.0, total)
    with np.errstate(invalid="ignore"):
        weights = np.exp(z - safe[..., None])
    return np.where(dead[..., None], 0.0, weights)


def _edge_signs(trellis: Trellis):
    x_sys = 2.0 * trellis.edge_input - 1.0
    x_par = 2.0 * trellis.edge_parity - 1.0
    return x_sys, x_par


def branch_metrics(trellis: Trellis, inp: SisoInput) -> np.ndarray:
    """Log branch metrics ``(batch, K + m, 2 * num_states)``."""

    if inp.tail_sys.shape[1] != trellis.memory:
        raise ContractError(
            f"tail length {inp.tail_sys.shape[1]} does not match trellis memory {trellis.memory}"
        )
    batch = inp.sys_llr.shape[0]
    sys_full = np.concatenate([inp.sys_llr, inp.tail_sys], axis=1)
    par_full = np.concatenate([inp.par_llr, inp.tail_par], axis=1)
    prior_full = np.concatenate([inp.prior, np.zeros((batch, trellis.memory))], axis=1)
    x_sys, x_par = _edge_signs(trellis)
    return 0.5 * (
        (sys_full + prior_full)[:, :, None] * x_sys + par_full[:, :, None] * x_par
    )


def _terminal(batch: int, num_states: int) -> np.ndarray:
    row = np.full((batch, num_states), -np.inf)
    row[:, 0] = 0.0
    return row


def _edge_totals(ws: SisoWorkspace) -> np.ndarray:
    """``alpha_k(s') + gamma_k(e) + beta_{k+1}(s)`` for the K information steps."""
    trellis, K = ws.trellis, ws.K
    return (
        ws.alpha[:, :K][:, :, trellis.edge_from]
        + ws.gamma[:, :K]
        + ws.beta[:, 1 : K + 1][:, :, trellis.edge_to]
    )


def siso_decode(
    trellis: Trellis,
    inp: SisoInput,
    algorithm=SisoAlgorithm.MAP,
    *,
    record: bool = False,
) -> SisoOutput:
    algorithm = parse_algorithm(algorithm)
    gamma = branch_metrics(trellis, inp)
    batch, steps, _ = gamma.shape
    S = trellis.num_states
    incoming = trellis.incoming_edges
    edge_from = trellis.edge_from
    edge_to = trellis.edge_to

    alpha = np.empty((batch, steps + 1, S))
    beta = np.empty((batch, steps + 1, S))
    alpha[:, 0] = _terminal(batch, S)
    beta[:, steps] = _terminal(batch, S)

    with np.errstate(invalid="ignore"):
        for k in range(steps):
            v = alpha[:, k, edge_from] + gamma[:, k]
            row = _pair(v[:, incoming[:, 0]], v[:, incoming[:, 1]], algorithm)
            alpha[:, k + 1] = row - np.max(row, axis=1, keepdims=True)
        for k in range(steps - 1, -1, -1):
            v = (gamma[:, k] + beta[:, k + 1, edge_to]).reshape(batch, S, 2)
            row = _pair(v[..., 0], v[..., 1], algorithm)
            beta[:, k] = row - np.max(row, axis=1, keepdims=True)

    ws = SisoWorkspace(
        trellis=trellis,
        algorithm=algorithm,
        K=inp.K,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        recorded=record,
    )
    z = _edge_totals(ws)
    posterior = _reduce(z[..., 1::2], algorithm) - _reduce(z[..., 0::2], algorithm)
    extrinsic = posterior - inp.sys_llr - inp.prior
    return SisoOutput(posterior=posterior, extrinsic=extrinsic, workspace=ws)


def siso_backward(
    ws: SisoWorkspace,
    grad_posterior: Optional[np.ndarray] = None,
    grad_extrinsic: Optional[np.ndarray] = None,
) -> SisoGradients:
    """Gradients of ``sum(grad_posterior * posterior + grad_extrinsic * extrinsic)``."""

    if not ws.recorded:
        raise ContractError("siso_backward needs a workspace recorded with record=True")
    trellis, algorithm, K = ws.trellis, ws.algorithm, ws.K
    batch, steps, _ = ws.gamma.shape
    S = trellis.num_states
    incoming = trellis.incoming_edges
    edge_from = trellis.edge_from
    edge_to = trellis.edge_to

    g_post = np.zeros((batch, K))
    g_direct = np.zeros((batch, K))
    if grad_posterior is not None:
        g_post = g_post + _check_grad(grad_posterior, batch, K)
    if grad_extrinsic is not None:
        g_ext = _check_grad(grad_extrinsic, batch, K)
        g_post = g_post + g_ext
        g_direct = g_direct - g_ext

    z = _edge_totals(ws)
    g_z = np.empty_like(z)
    g_z[..., 1::2] = g_post[..., None] * _reduce_weights(z[..., 1::2], algorithm)
    g_z[..., 0::2] = -g_post[..., None] * _reduce_weights(z[..., 0::2], algorithm)

    g_gamma = np.zeros_like(ws.gamma)
    g_alpha = np.zeros_like(ws.alpha)
    g_beta = np.zeros_like(ws.beta)
    g_gamma[:, :K] += g_z
    g_alpha[:, :K] += g_z.reshape(batch, K, S, 2).sum(axis=-1)
    g_beta[:, 1 : K + 1] += g_z[..., incoming[:, 0]] + g_z[..., incoming[:, 1]]

    with np.errstate(invalid="ignore"):
        # beta_k depends on beta_{k+1}: unwind in increasing k
        for k in range(steps):
            v = (ws.gamma[:, k] + ws.beta[:, k + 1, edge_to]).reshape(batch, S, 2)
            wa, wb = _pair_weights(v[..., 0], v[..., 1], algorithm)
            g_row = g_beta[:, k]
            g_v = np.stack([g_row * wa, g_row * wb], axis=-1).reshape(batch, 2 * S)
            g_gamma[:, k] += g_v
            g_beta[:, k + 1] += g_v[:, incoming[:, 0]] + g_v[:, incoming[:, 1]]

        # alpha_{k+1} depends on alpha_k: unwind in decreasing k
        for k in range(steps - 1, -1, -1):
            v = ws.alpha[:, k, edge_from] + ws.gamma[:, k]
            wa, wb = _pair_weights(v[:, incoming[:, 0]], v[:, incoming[:, 1]], algorithm)
            g_row = g_alpha[:, k + 1]
            g_v = np.empty((batch, 2 * S))
            g_v[:, incoming[:, 0]] = g_row * wa
            g_v[:, incoming[:, 1]] = g_row * wb
            g_gamma[:, k] += g_v
            g_alpha[:, k] += g_v.reshape(batch, S, 2).sum(axis=-1)

    x_sys, x_par = _edge_signs(trellis)
    g_sys_full = 0.5 * (g_gamma * x_sys).sum(axis=-1)
    g_par_full = 0.5 * (g_gamma * x_par).sum(axis=-1)
    return SisoGradients(
        sys_llr=g_sys_full[:, :K] + g_direct,
        par_llr=g_par_full[:, :K],
        prior=g_sys_full[:, :K] + g_direct,
        tail_sys=g_sys_full[:, K:],
        tail_par=g_par_full[:, K:],
    )


def _check_grad(grad: np.ndarray, batch: int, K: int) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(grad, dtype=np.float64))
    if arr.shape != (batch, K):
        raise ContractError(f"upstream gradient shape {arr.shape} does not match ({batch}, {K})")
    return arr
