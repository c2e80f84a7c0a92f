import csv

import numpy as np
import pytest

from avis.bound import (
    bound_coefficients, context_mismatch, coupled_run, lipschitz_empirical, lipschitz_exact, sweep_bound,
    t0_sensitivity, verify_bound, write_bound_csv
)
from avis.core import Chunk, NoiseStream, init_stream, make_schedule, renoise_stream
from avis.misc.errors import ParameterError, UnsupportedPriorError
from avis.prior import GaussARPrior, LearnedPrior, VectorFieldPrior
from avis.sampler.steps import initialize_chunk, reverse_step
from conftest import random_array


class ZeroField(VectorFieldPrior):
    def _field(self, z_t, t, ctx):
        return np.zeros_like(z_t)


class ConstantField(VectorFieldPrior):
    def _field(self, z_t, t, ctx):
        return np.full_like(z_t, 0.3)


def test_exact_constants_in_limits():
    wide = GaussARPrior(rho=0.5, sigma_p=1e4)
    assert wide.lipschitz_z(0.5, conditional=False) == pytest.approx(2.0, rel=1e-6)
    independent = GaussARPrior(rho=0.0, sigma_p=1.0)
    assert independent.lipschitz_ctx(0.3) == 0.0


@pytest.mark.parametrize('t', [0.05, 0.3, 0.8])
def test_exact_constants_match_finite_differences(t):
    prior = GaussARPrior(rho=0.8, sigma_p=1.2)
    z, prev = random_array((1, 2, 2, 1), 1), random_array((1, 2, 2, 1), 2)
    h = 1e-3
    ctx = prior.empty_context().append(1, prev)
    bumped_z = z.copy()
    bumped_z[0, 0, 0, 0] += h
    bumped_prev = prev.copy()
    bumped_prev[0, 0, 0, 0] += h
    base = prior.vector_field(Chunk(2, z), t, ctx)
    dz = (prior.vector_field(Chunk(2, bumped_z), t, ctx) - base)[0, 0, 0, 0] / h
    dc = (prior.vector_field(Chunk(2, z), t, prior.empty_context().append(1, bumped_prev)) - base)[0, 0, 0, 0] / h
    assert abs(dz) == pytest.approx(prior.lipschitz_z(t), rel=1e-8)
    assert abs(dc) == pytest.approx(prior.lipschitz_ctx(t), rel=1e-8)


def test_empirical_constants_bracket_exact_ones():
    prior = GaussARPrior(rho=0.9, sigma_p=1.0)
    schedule = make_schedule(0.5, 4)
    exact_z, exact_c = lipschitz_exact(prior, schedule)
    emp_z, emp_c = lipschitz_empirical(prior, schedule, trials=10)
    for e, x in zip(emp_z + emp_c, exact_z + exact_c):
        assert 0.99 * x <= e <= x + 1e-9


def test_empirical_constants_of_flat_fields_vanish():
    schedule = make_schedule(0.3, 2)
    for prior in (ZeroField(), ConstantField()):
        L_z, L_c = lipschitz_empirical(prior, schedule, trials=5)
        assert L_z == [0.0, 0.0] and L_c == [0.0, 0.0]


def test_exact_constants_need_the_analytic_prior():
    with pytest.raises(UnsupportedPriorError):
        lipschitz_exact(LearnedPrior(chunk_len=3), make_schedule(0.1, 2))


def test_coefficients_for_single_step():
    schedule = make_schedule(0.5, 1)
    c = bound_coefficients(schedule, [2.0], [3.0])
    assert c.lambdas == (2.0,)
    assert c.betas == (1.5,)
    assert c.Lambda == pytest.approx(1.0)
    assert c.B == pytest.approx(1.5)


def test_coefficients_compose_over_steps():
    schedule = make_schedule(0.4, 3)
    c = bound_coefficients(schedule, [1.0, 2.0, 3.0], [0.5, 0.5, 0.5])
    l0, l1, l2 = c.lambdas
    b0, b1, b2 = c.betas
    assert c.Lambda == pytest.approx(0.6 * l0 * l1 * l2)
    assert c.B == pytest.approx(l1 * l2 * b0 + l2 * b1 + b2)


def test_identical_runs_have_zero_error(gauss_prior):
    z = random_array((3, 4, 4, 1), 3)
    ctx = gauss_prior.empty_context().append(1, random_array((3, 4, 4, 1), 4))
    report = coupled_run(gauss_prior, make_schedule(0.3, 3), z, z.copy(), ctx, ctx)
    assert report.errors == [0.0] * 4
    assert report.delta == 0.0
    assert report.satisfied


def test_initial_error_shrinks_by_one_minus_t0(gauss_prior):
    schedule = make_schedule(0.25, 2)
    z, target = random_array((3, 4, 4, 1), 5), random_array((3, 4, 4, 1), 6)
    ctx = gauss_prior.empty_context()
    report = coupled_run(gauss_prior, schedule, z, target, ctx, ctx)
    assert report.eps_t0 == pytest.approx(0.75 * report.eps0, abs=1e-12)


def test_every_step_obeys_its_recursion(gauss_prior):
    schedule = make_schedule(0.6, 4)
    z, target = random_array((3, 4, 4, 1), 7), random_array((3, 4, 4, 1), 8)
    prev = random_array((3, 4, 4, 1), 9)
    ctx = gauss_prior.empty_context().append(1, prev + 0.2 * random_array(prev.shape, 10))
    ctx_target = gauss_prior.empty_context().append(1, prev)
    report = coupled_run(gauss_prior, schedule, z, target, ctx, ctx_target, seed=4)
    assert report.delta == pytest.approx(context_mismatch(ctx, ctx_target))
    c = report.coefficients
    for k in range(schedule.steps):
        assert report.errors[k + 1] <= c.lambdas[k] * report.errors[k] + c.betas[k] * report.delta + 1e-12
    assert report.satisfied and report.slack >= 0


def test_shared_noise_cancels_exactly_along_the_sampler_trajectories(gauss_prior):
    schedule = make_schedule(0.5, 3)
    z, target = random_array((3, 4, 4, 1), 12), random_array((3, 4, 4, 1), 13)
    prev = random_array((3, 4, 4, 1), 14)
    ctx = gauss_prior.empty_context().append(1, prev + 0.3)
    ctx_target = gauss_prior.empty_context().append(1, prev)
    report = coupled_run(gauss_prior, schedule, z, target, ctx, ctx_target, seed=6)
    assert report.errors[0] == float(np.linalg.norm(0.5 * z - 0.5 * target))

    a = initialize_chunk(Chunk(2, z), schedule.t0, init_stream(6, 2))
    b = initialize_chunk(Chunk(2, target), schedule.t0, init_stream(6, 2))
    for k, t, t_next in schedule.pairs():
        shrunk_a = (1.0 - t_next) * gauss_prior.denoised_estimate(a, t, ctx)
        shrunk_b = (1.0 - t_next) * gauss_prior.denoised_estimate(b, t, ctx_target)
        assert report.errors[k + 1] == float(np.linalg.norm(shrunk_a - shrunk_b))
        a = reverse_step(gauss_prior, a, ctx, t_next, renoise_stream(6, 2, k))
        b = reverse_step(gauss_prior, b, ctx_target, t_next, renoise_stream(6, 2, k))
    np.testing.assert_array_equal(report.finals[0], a.data)
    np.testing.assert_array_equal(report.finals[1], b.data)


def test_verify_bound_flags_violations(gauss_prior):
    z = random_array((3, 4, 4, 1), 11)
    ctx = gauss_prior.empty_context()
    report = coupled_run(gauss_prior, make_schedule(0.3, 2), z, z + 1.0, ctx, ctx)
    report.errors[-1] = report.bound + 1.0
    holds, margin = verify_bound(report, slack=0.0)
    assert not holds and margin == pytest.approx(-1.0)
    assert not report.satisfied


def test_bound_sweep_over_one_hundred_seeds(gauss_prior):
    reports = sweep_bound(gauss_prior, make_schedule(0.1, 2), seeds=100, chunk_shape=(3, 4, 4, 1))
    assert len(reports) == 100
    assert all(r.satisfied for r in reports)
    assert all(r.chunk == 2 and r.delta > 0 for r in reports)
    with pytest.raises(ParameterError):
        sweep_bound(gauss_prior, make_schedule(0.1, 2), seeds=0)


def test_context_coefficient_grows_with_t0(gauss_prior):
    rows = t0_sensitivity([0.1, 0.2, 0.5], steps=2, prior=gauss_prior)
    B = [b for _, _, b in rows]
    assert B[0] < B[1] < B[2]
    constant = t0_sensitivity([0.1, 0.5], steps=2, L_z=1.0, L_c=1.0)
    assert constant[0][2] < constant[1][2]
    with pytest.raises(ParameterError):
        t0_sensitivity([0.1], steps=2)


def test_bound_csv_has_step_and_summary_rows(tmp_path, gauss_prior):
    reports = sweep_bound(gauss_prior, make_schedule(0.1, 3), seeds=2, chunk_shape=(3, 4, 4, 1))
    path = tmp_path / 'bound.csv'
    write_bound_csv(reports, path)
    with open(path, newline='') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 2 * 4
    summaries = [r for r in rows if r['row'] == 'summary']
    assert [int(r['satisfied']) for r in summaries] == [1, 1]
    assert float(summaries[0]['bound']) == pytest.approx(reports[0].bound)
