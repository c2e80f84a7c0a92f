import numpy as np
import pytest

from avis.analysis import psnr
from avis.codec import Codec
from avis.core import Chunk, Measurement, NoiseStream, Video
from avis.misc.errors import ParameterError
from avis.operators import IdentityDegradation, build_operator, measure
from avis.prior import GaussARPrior
from avis.sampler import (
    MODES, Guidance, RunConfig, init_estimate, initialize_chunk, reverse_step, run_avis, run_flash,
    run_joint_baseline, run_mode
)
from avis.solvers import solve_prerestore
from conftest import gauss_sequence, random_array


def _problem(frames=17, size=8, task='sr4', seed=0):
    x = Video(np.clip(0.5 + 0.2 * random_array((frames, size, size, 1), seed), 0.0, 1.0))
    op = build_operator(task, x.shape, mask_seed=seed)
    return x, op, measure(op, x)


def test_init_estimate_encodes_once_in_prerestore_bucket():
    _, op, y = _problem()
    codec = Codec('pool_interp', spatial=2, temporal=4)
    x_init, z_init = init_estimate(op, y, codec, chunk_len=1)
    assert x_init.shape == (17, 8, 8, 1)
    assert z_init.data.shape == (5, 4, 4, 1)
    assert codec.read_counters('prerestore') == (1, 0)


def test_initialize_chunk_endpoints():
    chunk = Chunk(1, random_array((2, 3, 3, 1), 1))
    kept = initialize_chunk(chunk, 0.0, NoiseStream('init', 0))
    np.testing.assert_array_equal(kept.data, chunk.data)
    assert kept.t == 0.0
    pure = initialize_chunk(chunk, 1.0, NoiseStream('init', 0))
    np.testing.assert_array_equal(pure.data, NoiseStream('init', 0).normal(chunk.data.shape))
    with pytest.raises(ParameterError):
        initialize_chunk(chunk, 1.5, NoiseStream('init', 0))


def test_initialize_chunk_shared_noise_contracts_the_gap():
    a, b = Chunk(1, random_array((2, 3, 3, 1), 2)), Chunk(1, random_array((2, 3, 3, 1), 3))
    stream = NoiseStream('init', 4)
    za = initialize_chunk(a, 0.3, stream.clone())
    zb = initialize_chunk(b, 0.3, stream.clone())
    np.testing.assert_allclose(za.data - zb.data, 0.7 * (a.data - b.data), atol=1e-14)


def test_reverse_step_to_zero_is_the_denoised_estimate(gauss_prior):
    chunk = Chunk(1, random_array((3, 4, 4, 1), 5), t=0.2)
    ctx = gauss_prior.empty_context()
    out = reverse_step(gauss_prior, chunk, ctx, 0.0, NoiseStream('unused', 0))
    assert out.t == 0.0
    np.testing.assert_array_equal(out.data, gauss_prior.denoised_estimate(chunk, 0.2, ctx))


def test_reverse_step_renoises_with_its_stream(gauss_prior):
    chunk = Chunk(1, random_array((3, 4, 4, 1), 6), t=0.2)
    ctx = gauss_prior.empty_context()
    out = reverse_step(gauss_prior, chunk, ctx, 0.1, NoiseStream('renoise', 0))
    z_hat = gauss_prior.denoised_estimate(chunk, 0.2, ctx)
    expected = 0.9 * z_hat + 0.1 * NoiseStream('renoise', 0).normal(z_hat.shape)
    np.testing.assert_allclose(out.data, expected, atol=1e-15)
    with pytest.raises(ParameterError):
        reverse_step(gauss_prior, chunk, ctx, 0.3, NoiseStream('renoise', 0))


def test_identity_guidance_averages_estimate_and_measurement(gauss_prior):
    shape = (3, 4, 4, 1)
    chunk = Chunk(1, random_array(shape, 7), t=0.2)
    y = random_array(shape, 8)
    op, codec, ctx = IdentityDegradation(shape), Codec('identity'), gauss_prior.empty_context()
    guidance = Guidance(op, Measurement(y), codec, gamma=1.0, iters=3, leading=True)
    out = reverse_step(gauss_prior, chunk, ctx, 0.0, NoiseStream('unused', 0), guidance)
    z_hat = gauss_prior.denoised_estimate(chunk, 0.2, ctx)
    np.testing.assert_allclose(out.data, 0.5 * (y + z_hat), atol=1e-12)
    assert codec.read_counters('guidance') == (1, 1)


def test_zero_gamma_guidance_changes_nothing(gauss_prior):
    shape = (3, 4, 4, 1)
    chunk = Chunk(1, random_array(shape, 9), t=0.2)
    op, ctx = IdentityDegradation(shape), gauss_prior.empty_context()
    guidance = Guidance(op, Measurement(random_array(shape, 10)), Codec('identity'), 0.0, 3, True)
    guided = reverse_step(gauss_prior, chunk, ctx, 0.1, NoiseStream('s', 0), guidance)
    plain = reverse_step(gauss_prior, chunk, ctx, 0.1, NoiseStream('s', 0))
    np.testing.assert_allclose(guided.data, plain.data, atol=1e-15)


def _pool_run(mode, **overrides):
    _, op, y = _problem()
    codec = Codec('pool_interp', spatial=2, temporal=4)
    cfg = RunConfig(mode=mode, steps=2, chunk_len=1, **overrides)
    _, trace = run_mode(cfg, op, y, GaussARPrior(), codec)
    return trace


def test_guidance_codec_pass_counts():
    avis, flash = _pool_run('avis'), _pool_run('flash')
    a_totals, f_totals = avis.bucket_totals(), flash.bucket_totals()
    assert a_totals['guidance'] == (10, 10)
    assert f_totals['guidance'] == (2, 2)
    assert f_totals['guidance'][0] / a_totals['guidance'][0] == pytest.approx(1 / 5)
    for totals in (a_totals, f_totals):
        assert totals['prerestore'] == (1, 0)
        assert totals['display'] == (0, 5)
    assert len(avis.guidance_calls()) == 10
    assert flash.guidance_calls() == [(1, 0), (1, 1)]


def test_periodic_flash_guides_every_period():
    _, op, y = _problem(frames=14, size=4, task='identity')
    cfg = RunConfig(mode='flash_periodic', steps=2, chunk_len=1, guidance_period=7)
    _, trace = run_flash(cfg, op, y, GaussARPrior(), Codec('identity'))
    assert {n for n, _ in trace.guidance_calls()} == {1, 8}


def test_display_latency():
    for mode in ('avis', 'flash', 'flash_periodic'):
        assert _pool_run(mode).first_display_step() == 2
    joint = _pool_run('joint')
    assert joint.first_display_step() == 10
    assert set(joint.display_steps().values()) == {10}
    assert _pool_run('avis').display_steps() == {1: 2, 2: 4, 3: 6, 4: 8, 5: 10}


def test_single_chunk_runs_agree_across_modes():
    _, op, y = _problem(frames=3, size=8)
    outputs = []
    for mode in MODES:
        cfg = RunConfig(mode=mode, steps=3, chunk_len=3, seed=5)
        z, trace = run_mode(cfg, op, y, GaussARPrior(), Codec('identity'))
        outputs.append((z.data, trace.video().data))
    for z, pixels in outputs[1:]:
        np.testing.assert_array_equal(z, outputs[0][0])
        np.testing.assert_array_equal(pixels, outputs[0][1])


@pytest.mark.parametrize('mode', MODES)
def test_runs_are_deterministic(mode):
    _, op, y = _problem(frames=9, size=8, task='inpaint')
    cfg = RunConfig(mode=mode, chunk_len=3, seed=11)
    first, _ = run_mode(cfg, op, y, GaussARPrior(), Codec('identity'))
    second, _ = run_mode(cfg, op, y, GaussARPrior(), Codec('identity'))
    np.testing.assert_array_equal(first.data, second.data)


def test_entry_points_reject_other_modes():
    _, op, y = _problem(frames=3)
    with pytest.raises(ParameterError):
        run_avis(RunConfig(mode='joint'), op, y, GaussARPrior(), Codec('identity'))
    with pytest.raises(ParameterError):
        run_flash(RunConfig(mode='avis'), op, y, GaussARPrior(), Codec('identity'))
    with pytest.raises(ParameterError):
        run_joint_baseline(RunConfig(mode='flash'), op, y, GaussARPrior(), Codec('identity'))
    with pytest.raises(ParameterError):
        RunConfig(mode='parallel')


def test_streaming_output_ignores_future_measurements():
    x, op, y = _problem(frames=6, size=8, task='tavg')
    later = y.payload.copy()
    later[4:] += 0.3
    cfg = RunConfig(mode='avis', chunk_len=2, seed=2, prerestore_iters=0)
    _, base = run_avis(cfg, op, y, GaussARPrior(), Codec('identity'))
    _, moved = run_avis(cfg, op, Measurement(later), GaussARPrior(), Codec('identity'))
    for (n, a), (_, b) in zip(base.displayed[:2], moved.displayed[:2]):
        np.testing.assert_array_equal(a, b, err_msg=f'chunk {n}')
    assert not np.array_equal(base.displayed[2][1], moved.displayed[2][1])


def test_avis_improves_on_pre_restoration_for_gauss_ar_video():
    gains, margins = [], []
    for seed in range(10):
        x = Video(gauss_sequence(seed, chunks=3, chunk_len=3, height=16, width=16).data)
        op = build_operator('inpaint', x.shape, keep=0.5, mask_seed=seed)
        y = measure(op, x)
        quality = {}
        for mode in ('avis', 'flash'):
            cfg = RunConfig(mode=mode, chunk_len=3, seed=seed)
            _, trace = run_mode(cfg, op, y, GaussARPrior(rho=0.9, sigma_p=1.0), Codec('identity'))
            quality[mode] = psnr(trace.video(), x)
        gains.append(quality['avis'] - psnr(solve_prerestore(op, y), x))
        margins.append(quality['avis'] - quality['flash'])
    assert np.mean(gains) > 0
    assert sum(g > 0 for g in gains) >= 9
    assert sum(m >= -1.0 for m in margins) >= 9
