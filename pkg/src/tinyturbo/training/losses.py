"""Training losses on posterior LLRs, each paired with its gradient."""

from __future__ import annotations

from typing import Tuple

import numpy as np

from tinyturbo.core.errors import ContractError


def _pair(a, b, what: str) -> Tuple[np.ndarray, np.ndarray]:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape:
        raise ContractError(f"{what} shapes differ: {a.shape} vs {b.shape}")
    return a, b


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def bce_loss(posteriors, messages) -> float:
    """Batch mean of the per-frame summed bit cross-entropy.

    With ``L = log P(1)/P(0)`` the bit term is ``softplus(-L)`` for ``u = 1``
    and ``softplus(L)`` for ``u = 0``.
    """
    return bce_loss_and_grad(posteriors, messages)[0]


def bce_loss_and_grad(posteriors, messages) -> Tuple[float, np.ndarray]:
    llr, bits = _pair(posteriors, messages, "posterior/message")
    signed = (1.0 - 2.0 * bits) * llr
    batch = llr.shape[0]
    loss = float(_softplus(signed).sum() / batch)
    grad = (1.0 - 2.0 * bits) * _sigmoid(signed) / batch
    return loss, grad


def mse_teacher_loss(student, teacher) -> float:
    return mse_teacher_loss_and_grad(student, teacher)[0]


def mse_teacher_loss_and_grad(student, teacher) -> Tuple[float, np.ndarray]:
    s, t = _pair(student, teacher, "student/teacher")
    diff = s - t
    loss = float(np.mean(diff * diff))
    return loss, 2.0 * diff / diff.size
