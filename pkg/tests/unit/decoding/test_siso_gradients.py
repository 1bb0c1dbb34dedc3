"""Reverse-mode gradients of the SISO decoder against finite differences."""

from __future__ import annotations

import numpy as np
import pytest

from tinyturbo.coding.trellis import lte_trellis
from tinyturbo.core.errors import ContractError
from tinyturbo.decoding.siso import SisoInput, lse_grad, max_log_grad, siso_backward, siso_decode

FIELDS = ("sys_llr", "par_llr", "prior", "tail_sys", "tail_par")
STEP = 1e-5


def _input(seed: int, K: int = 10, batch: int = 2) -> SisoInput:
    rng = np.random.default_rng(seed)
    return SisoInput(
        sys_llr=rng.normal(0.0, 1.5, (batch, K)),
        par_llr=rng.normal(0.0, 1.5, (batch, K)),
        prior=rng.normal(0.0, 1.0, (batch, K)),
        tail_sys=rng.normal(0.0, 1.5, (batch, 3)),
        tail_par=rng.normal(0.0, 1.5, (batch, 3)),
    )


def _objective(inp: SisoInput, algorithm: str, g_post, g_ext) -> float:
    posterior, extrinsic, _ = siso_decode(lte_trellis(), inp, algorithm)
    return float(np.sum(g_post * posterior) + np.sum(g_ext * extrinsic))


def _perturbed(inp: SisoInput, name: str, index, delta: float) -> SisoInput:
    arrays = {key: getattr(inp, key).copy() for key in FIELDS}
    arrays[name][index] += delta
    return SisoInput(**arrays)


@pytest.mark.parametrize("algorithm", ["map", "max_log_map"])
def test_backward_matches_central_differences(algorithm: str) -> None:
    inp = _input(11)
    rng = np.random.default_rng(12)
    g_post = rng.normal(size=inp.sys_llr.shape)
    g_ext = rng.normal(size=inp.sys_llr.shape)

    _, _, ws = siso_decode(lte_trellis(), inp, algorithm, record=True)
    grads = siso_backward(ws, grad_posterior=g_post, grad_extrinsic=g_ext)

    for name in FIELDS:
        analytic = getattr(grads, name)
        assert analytic.shape == getattr(inp, name).shape
        numeric = np.empty_like(analytic)
        for index in np.ndindex(analytic.shape):
            plus = _objective(_perturbed(inp, name, index, STEP), algorithm, g_post, g_ext)
            minus = _objective(_perturbed(inp, name, index, -STEP), algorithm, g_post, g_ext)
            numeric[index] = (plus - minus) / (2 * STEP)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-6, err_msg=name)


def test_reduction_gradients() -> None:
    np.testing.assert_allclose(lse_grad([0.0, 0.0]), [0.5, 0.5])
    np.testing.assert_allclose(lse_grad([np.log(3.0), 0.0]), [0.75, 0.25])
    assert max_log_grad([1.0, 3.0, 3.0]).tolist() == [0.0, 1.0, 0.0]
    assert max_log_grad([2.0, -1.0]).tolist() == [1.0, 0.0]


def test_backward_needs_recorded_workspace() -> None:
    _, _, ws = siso_decode(lte_trellis(), _input(0), "map")
    with pytest.raises(ContractError):
        siso_backward(ws, grad_posterior=np.ones((2, 10)))


def test_backward_rejects_mismatched_upstream() -> None:
    _, _, ws = siso_decode(lte_trellis(), _input(0), "map", record=True)
    with pytest.raises(ContractError):
        siso_backward(ws, grad_posterior=np.ones((2, 9)))
