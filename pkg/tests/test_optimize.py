"""Adam, finite differences, frequency grid search."""

import numpy as np
import pytest

from qlink.optimize import (AdamConfig, GridConfig, OptimizeError, adam_minimize,
                            finite_difference_gradient, optimize_frequencies)
from qlink.device import paper_device


def test_fd_gradient_quadratic():
    g = finite_difference_gradient(lambda x: float(x[0] ** 2), np.array([3.0]), 1e-4)
    assert g[0] == pytest.approx(6.0, abs=1e-6)


def test_fd_gradient_product():
    g = finite_difference_gradient(lambda x: float(x[0] * x[1]), np.array([2.0, 5.0]),
                                   1e-4)
    np.testing.assert_allclose(g, [5.0, 2.0], atol=1e-6)


def test_fd_gradient_matches_analytic_relative():
    # relative 1e-6 agreement on smooth shipped test functions
    f = lambda x: float(np.sin(x[0]) + x[1] ** 3)
    x = np.array([0.7, 1.3])
    g = finite_difference_gradient(f, x, 1e-4)
    exact = np.array([np.cos(0.7), 3 * 1.3**2])
    assert np.max(np.abs(g - exact) / np.abs(exact)) < 1e-6


def test_fd_gradient_rejects_nonfinite():
    with pytest.raises(OptimizeError):
        finite_difference_gradient(lambda x: float("nan"), np.array([1.0]), 1e-4)


def test_adam_quadratic_1d():
    res = adam_minimize(lambda x: float((x[0] - 3.0) ** 2), [0.0],
                        AdamConfig(learning_rate=0.05, max_iterations=5000))
    assert abs(res.best_params[0] - 3.0) < 1e-6


def test_adam_rosenbrock():
    def rosen(x):
        return float((1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2)

    def rosen_grad(x):
        return np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2),
                         200 * (x[1] - x[0] ** 2)])

    res = adam_minimize(rosen, [-1.0, 1.0],
                        AdamConfig(learning_rate=0.003, max_iterations=200_000),
                        gradient=rosen_grad)
    assert res.best_loss < 1e-4


def test_adam_deterministic():
    f = lambda x: float((x[0] - 1.0) ** 2 + 0.5 * np.sin(3 * x[0]) ** 2)
    r1 = adam_minimize(f, [4.0], AdamConfig(learning_rate=0.02, max_iterations=800))
    r2 = adam_minimize(f, [4.0], AdamConfig(learning_rate=0.02, max_iterations=800))
    assert r1.history == r2.history
    assert np.array_equal(r1.best_params, r2.best_params)


def test_adam_history_invariants():
    res = adam_minimize(lambda x: float(x[0] ** 2), [2.0],
                        AdamConfig(learning_rate=0.05, max_iterations=300))
    assert res.best_loss == min(res.history)
    assert len(res.history) >= 2
    assert res.best_loss <= res.history[0]


def test_adam_convergence_flag():
    res = adam_minimize(lambda x: float(x[0] ** 2), [0.5],
                        AdamConfig(learning_rate=0.01, max_iterations=5000,
                                   tolerance=1e-14))
    assert res.converged
    assert res.iterations < 5000


def test_adam_divergence_aborts():
    # walking off a cliff in the landscape: loss blows past 1e6 x initial
    def f(x):
        if abs(x[0]) > 3.0:
            return 1e12
        return float((x[0] - 5.0) ** 2)

    with pytest.raises(OptimizeError):
        adam_minimize(f, [2.0], AdamConfig(learning_rate=0.5, max_iterations=100))


def test_adam_config_validation():
    with pytest.raises(OptimizeError):
        AdamConfig(beta1=1.5)
    with pytest.raises(OptimizeError):
        AdamConfig(learning_rate=0.0)


def test_optimize_frequencies_requires_ladder():
    d = paper_device("explicit")
    with pytest.raises(OptimizeError):
        optimize_frequencies(d, "cosine", 8.0)


def test_optimize_frequencies_small_search():
    # tiny coarse search at FSR 403: inside the window and never worse than
    # the best coarse point
    d = paper_device("ladder", fsr_mhz=403.0)
    cfg = GridConfig(coarse_step_mhz=50.0, refine_step_mhz=5.0, n_basins=1,
                     search_dt_ns=0.05, final_dt_ns=0.02)
    res = optimize_frequencies(d, "cosine", 8.0, config=cfg)
    wm2 = 5.83
    assert wm2 < res.wq1_ghz < wm2 + 0.403
    assert wm2 - 0.403 < res.wq2_ghz < wm2
    coarse_leak = res.stages[0][3]
    assert res.leakage <= coarse_leak * 1.05  # refined never worse than coarse
    assert res.target_population > 0.99
