import numpy as np
import pytest

from avis.core import Measurement, NoiseStream, Video
from avis.misc.errors import DivergenceError, ParameterError
from avis.operators import build_operator, measure
from avis.solvers import (
    CgConfig, bilinear_lift, cg_solve, lift_measurement, nearest_infill, proximal_objective, solve_prerestore,
    solve_proximal
)


def _spd(n, seed):
    stream = NoiseStream('spd', seed)
    M = stream.normal((n, n))
    return M.T @ M + np.eye(n), stream.normal(n)


@pytest.mark.parametrize('seed', range(20))
def test_cg_matches_direct_solve(seed):
    n = 16 + 2 * seed
    A, b = _spd(n, seed)
    result = cg_solve(lambda v: A @ v, b, np.zeros(n), CgConfig(max_iters=10 * n, rel_residual_tol=1e-14))
    expected = np.linalg.solve(A, b)
    assert np.linalg.norm(result.solution - expected) <= 1e-8 * np.linalg.norm(expected)


def test_cg_zero_rhs_needs_no_iterations():
    result = cg_solve(lambda v: 2.0 * v, np.zeros(5), np.zeros(5), CgConfig(max_iters=10))
    assert result.iterations == 0
    np.testing.assert_array_equal(result.solution, np.zeros(5))


def test_cg_warm_start_at_solution_stops_immediately():
    A, b = _spd(12, 0)
    x = np.linalg.solve(A, b)
    result = cg_solve(lambda v: A @ v, A @ x, x, CgConfig(max_iters=10, rel_residual_tol=1e-8))
    assert result.iterations == 0


def test_cg_respects_budget_and_reports_residuals():
    A, b = _spd(40, 1)
    calls = []
    result = cg_solve(lambda v: A @ v, b, np.zeros(40), CgConfig(max_iters=3, record_residuals=True),
                      callback=lambda k, x: calls.append(k))
    assert result.iterations == 3
    assert calls == [1, 2, 3]
    assert len(result.history) == 4
    assert result.history[-1] < result.history[0]


def test_cg_energy_error_decreases():
    A, b = _spd(30, 2)
    exact = np.linalg.solve(A, b)
    energies = []
    cg_solve(lambda v: A @ v, b, np.zeros(30), CgConfig(max_iters=20),
             callback=lambda k, x: energies.append((x - exact) @ A @ (x - exact)))
    assert all(b2 <= a2 * (1 + 1e-9) + 1e-10 for a2, b2 in zip(energies, energies[1:]))


def test_cg_non_finite_input_diverges():
    with pytest.raises(DivergenceError):
        cg_solve(lambda v: v, np.array([1.0, np.nan]), np.zeros(2), CgConfig(max_iters=2))


def test_cg_config_validation():
    with pytest.raises(ParameterError):
        CgConfig(max_iters=0)


def test_prerestore_identity_operator_returns_measurement(blobs):
    op = build_operator('identity', blobs.shape)
    x_init = solve_prerestore(op, measure(op, blobs))
    np.testing.assert_allclose(x_init.data, blobs.data, atol=1e-12)


def test_prerestore_inpainting_is_nearest_infill(blobs):
    op = build_operator('inpaint', blobs.shape, mask_seed=5)
    y = measure(op, blobs)
    x_init = solve_prerestore(op, y)
    np.testing.assert_array_equal(x_init.data, nearest_infill(y.payload, op))
    kept = op.mask[..., 0] > 0
    np.testing.assert_array_equal(x_init.data[kept], blobs.data[kept])


def test_prerestore_sr_reduces_residual_below_lift(blobs):
    op = build_operator('sr4', blobs.shape)
    y = measure(op, blobs)
    lifted = lift_measurement(op, y)
    x_init = solve_prerestore(op, y)
    assert np.linalg.norm(y.payload - op.apply(x_init)) <= np.linalg.norm(y.payload - op.apply(lifted))


def test_bilinear_lift_of_constant_is_constant():
    lifted = bilinear_lift(np.full((2, 4, 4, 1), 0.25), (2, 16, 16, 1))
    assert lifted.shape == (2, 16, 16, 1)
    np.testing.assert_allclose(lifted, 0.25, atol=1e-14)


def test_nearest_infill_breaks_ties_by_row_major_order():
    mask = np.zeros((1, 3, 3, 1))
    mask[0, 0, 1] = 1
    mask[0, 1, 0] = 1
    mask[0, 2, 2] = 1
    op = build_operator('inpaint', (1, 3, 3, 1), mask=mask)
    y = np.zeros((1, 3, 3, 1))
    y[0, 0, 1], y[0, 1, 0], y[0, 2, 2] = 1.0, 2.0, 3.0
    filled = nearest_infill(y, op)[0, ..., 0]
    # (0, 0) and (1, 1) are equidistant from (0, 1) and (1, 0); (0, 1) comes first
    assert filled[0, 0] == 1.0
    assert filled[1, 1] == 1.0
    assert filled[2, 0] == 2.0
    assert filled[1, 2] == 3.0


def test_proximal_identity_operator_closed_form():
    y = NoiseStream('y', 0).normal((2, 4, 4, 1))
    x_hat = NoiseStream('xhat', 0).normal((2, 4, 4, 1))
    op = build_operator('identity', y.shape)
    x = solve_proximal(op, Measurement(y), x_hat, gamma=1.0, iters=5)
    np.testing.assert_allclose(x.data, (y + x_hat) / 2, atol=1e-14)


def test_proximal_gamma_zero_returns_estimate():
    x_hat = NoiseStream('xhat', 1).normal((2, 4, 4, 1))
    op = build_operator('gblur', x_hat.shape)
    out = solve_proximal(op, Measurement(np.zeros(x_hat.shape)), x_hat, gamma=0.0)
    np.testing.assert_array_equal(out.data, x_hat)


@pytest.mark.parametrize('task', ['sr4', 'gblur', 'tavg', 'inpaint', 'stavg'])
def test_proximal_objective_does_not_increase(task, blobs):
    op = build_operator(task, blobs.shape, mask_seed=3)
    y = measure(op, blobs)
    x_hat = blobs.data + 0.2 * NoiseStream('perturb', 0).normal(blobs.shape)
    before = proximal_objective(op, y, x_hat, 1.0, x_hat)
    after = proximal_objective(op, y, x_hat, 1.0, solve_proximal(op, y, x_hat, 1.0, 5))
    assert after <= before + 1e-12
