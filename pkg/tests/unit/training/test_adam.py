"""Adam updates on weight arrays."""

from __future__ import annotations

import numpy as np

from tinyturbo.training.optim import Adam


def test_zero_learning_rate_leaves_weights() -> None:
    params = np.array([[0.5, 1.0, -2.0]])
    optimizer = Adam(lr=0.0)
    out = optimizer.step(params, np.array([[3.0, -1.0, 0.2]]))
    assert np.array_equal(out, params)


def test_first_step_moves_by_learning_rate_against_the_gradient() -> None:
    params = np.ones(4)
    out = Adam(lr=0.01).step(params, np.array([2.0, -0.5, 10.0, -3.0]))
    np.testing.assert_allclose(out, [0.99, 1.01, 0.99, 1.01], rtol=1e-6)
    assert np.array_equal(params, np.ones(4))


def test_steps_converge_on_a_quadratic() -> None:
    optimizer = Adam(lr=0.05)
    x = np.array([3.0, -2.0])
    for _ in range(2000):
        x = optimizer.step(x, 2.0 * (x - 1.0))
    np.testing.assert_allclose(x, [1.0, 1.0], atol=0.1)
    assert optimizer.t == 2000
