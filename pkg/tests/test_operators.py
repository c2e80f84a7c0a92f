import numpy as np
import pytest

from avis.core import NoiseStream, Video
from avis.misc.errors import ParameterError, ShapeError
from avis.operators import (
    Restricted, TASKS, apply_gram_plus_identity, build_operator, causal_average_matrix, gaussian_kernel_1d, make_mask,
    measure
)

SHAPE = (8, 16, 16, 1)


def _dot_test(op, seed):
    stream = NoiseStream(f'dot:{op.kind}', seed)
    x, u = stream.normal(op.input_shape), stream.normal(op.output_shape)
    lhs, rhs = np.vdot(op.apply(x), u), np.vdot(x, op.adjoint(u))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


@pytest.mark.parametrize('task', TASKS)
def test_adjoint_identity_over_random_pairs(task):
    op = build_operator(task, SHAPE, mask_seed=2)
    assert max(_dot_test(op, seed) for seed in range(100)) < 1e-10


@pytest.mark.parametrize('task', TASKS)
def test_adjoint_of_restricted_chunk(task):
    op = build_operator(task, SHAPE, mask_seed=4)
    sub = Restricted(op, 3, 6)
    assert sub.input_shape[0] == 3
    assert max(_dot_test(sub, seed) for seed in range(20)) < 1e-10


@pytest.mark.parametrize('task', TASKS)
def test_restricted_rows_plus_offset_equal_full_forward(task):
    op = build_operator(task, SHAPE, mask_seed=1)
    x = NoiseStream('full', 0).normal(SHAPE)
    sub = Restricted(op, 2, 5)
    expected = op.apply(x)[2:5]
    np.testing.assert_allclose(sub.apply(x[2:5]) + sub.offset(x[:2]), expected, atol=1e-12)


@pytest.mark.parametrize('task', TASKS)
def test_truncated_is_causal_prefix(task):
    op = build_operator(task, SHAPE, mask_seed=1)
    x = NoiseStream('prefix', 0).normal(SHAPE)
    np.testing.assert_allclose(op.truncated(5).apply(x[:5]), op.apply(x)[:5], atol=1e-12)


def test_output_shapes():
    assert build_operator('sr4', SHAPE).output_shape == (8, 4, 4, 1)
    assert build_operator('stavg', SHAPE).output_shape == (8, 4, 4, 1)
    assert build_operator('gblur', SHAPE).output_shape == SHAPE
    assert build_operator('tavg', SHAPE).output_shape == SHAPE


def test_apply_checks_shape():
    op = build_operator('gblur', SHAPE)
    with pytest.raises(ShapeError):
        op.apply(np.zeros((8, 16, 15, 1)))


def test_gram_plus_identity():
    op = build_operator('tavg', SHAPE)
    x = NoiseStream('gram', 0).normal(SHAPE)
    np.testing.assert_allclose(op.gram_plus_identity(2.0, x), 2.0 * op.adjoint(op.apply(x)) + x)


def test_gram_plus_identity_with_zero_weight_is_the_identity():
    op = build_operator('sr4', SHAPE)
    x = NoiseStream('gram0', 1).normal(SHAPE)
    np.testing.assert_array_equal(apply_gram_plus_identity(op, 0.0, x), x)


def test_gram_plus_identity_doubles_kept_inpainting_pixels():
    op = build_operator('inpaint', SHAPE, mask_seed=2)
    x = NoiseStream('gram-mask', 2).normal(SHAPE)
    out = apply_gram_plus_identity(op, 1.0, x)
    kept = op.mask[..., 0] == 1
    np.testing.assert_array_equal(out[kept], 2.0 * x[kept])
    np.testing.assert_array_equal(out[~kept], x[~kept])


@pytest.mark.parametrize('task', TASKS)
def test_gram_plus_identity_is_symmetric(task):
    op = build_operator(task, SHAPE)
    for seed in range(5):
        stream = NoiseStream(f'gram-sym:{task}', seed)
        u, v = stream.normal(SHAPE), stream.normal(SHAPE)
        lhs = np.vdot(u, apply_gram_plus_identity(op, 0.7, v))
        rhs = np.vdot(apply_gram_plus_identity(op, 0.7, u), v)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


def test_blur_preserves_constants_and_kernel_sums_to_one():
    op = build_operator('gblur', SHAPE)
    np.testing.assert_allclose(op.apply(np.full(SHAPE, 0.3)), 0.3, atol=1e-14)
    assert gaussian_kernel_1d(9, 1.5).sum() == pytest.approx(1.0)
    assert op.kernel.shape == (9, 9)


def test_full_scale_blur_preset():
    op = build_operator('gblur', (1, 64, 64, 1), full_scale=True)
    assert op.kernel_size == 61 and op.sigma == 3.0


def test_causal_average_rows():
    M = causal_average_matrix(6, 3)
    np.testing.assert_allclose(M.sum(axis=1), 1.0)
    assert np.allclose(np.triu(M, 1), 0.0)
    np.testing.assert_allclose(M[0, 0], 1.0)
    np.testing.assert_allclose(M[5, 3:6], 1 / 3)


def test_mask_keep_fraction_and_validation():
    mask = make_mask((4, 64, 64, 1), 0.5, seed=0)
    assert mask.shape == (4, 64, 64, 1)
    assert mask.mean() == pytest.approx(0.5, abs=0.02)
    shared = make_mask((4, 8, 8, 1), 0.5, seed=0, per_frame=False)
    assert all(np.array_equal(shared[0], shared[t]) for t in range(4))
    for keep in (0.0, 1.0):
        with pytest.raises(ParameterError):
            make_mask((1, 4, 4, 1), keep, seed=0)


def test_inpainting_zeroes_missing_pixels(blobs):
    op = build_operator('inpaint', blobs.shape, mask_seed=9)
    y = op.apply(blobs)
    assert np.all(y[op.mask[..., 0] == 0] == 0)


def test_measure_adds_seeded_noise(blobs):
    op = build_operator('identity', blobs.shape)
    clean = measure(op, blobs)
    noisy = measure(op, blobs, noise_sigma=0.1, seed=3)
    np.testing.assert_array_equal(clean.payload, blobs.data)
    np.testing.assert_array_equal(noisy.payload, measure(op, blobs, 0.1, 3).payload)
    assert np.std(noisy.payload - blobs.data) == pytest.approx(0.1, rel=0.05)


def test_unknown_task():
    with pytest.raises(ParameterError):
        build_operator('deblur', SHAPE)


def test_full_scale_mask_keeps_half_the_pixels():
    mask = make_mask((81, 480, 854, 1), 0.5, seed=4)
    assert abs(mask.mean() - 0.5) < 0.002
    np.testing.assert_array_equal(make_mask((2, 16, 16, 1), 0.5, seed=4), make_mask((2, 16, 16, 1), 0.5, seed=4))
    assert make_mask((2, 64, 64, 1), 0.999, seed=1).mean() > 0.99


def test_operator_params_describe_the_configuration():
    assert build_operator('sr4', SHAPE).params() == {'factor': 4}
    assert build_operator('gblur', SHAPE).params() == {'kernel_size': 9, 'sigma': 1.5}
    assert build_operator('tavg', SHAPE).params() == {'window': 7}
    assert build_operator('stavg', SHAPE).params() == {'factor': 4, 'window': 4}
    assert build_operator('identity', SHAPE).params() == {}
    mask = np.zeros(SHAPE)
    mask[:, :4] = 1.0
    assert build_operator('inpaint', SHAPE, mask=mask).params() == {'kept_fraction': 0.25}
