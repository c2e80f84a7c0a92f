from typing import Callable, Optional

import numpy as np
from scipy.ndimage import zoom
from scipy.spatial import cKDTree

from avis.core import Video, Measurement
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError, ShapeError
from avis.operators import Degradation, RandomInpainting, apply_gram_plus_identity
from avis.solvers.cg import CgConfig, cg_solve


def _payload(y) -> np.ndarray:
    return y.payload if isinstance(y, Measurement) else np.asarray(y, dtype=np.float64)


def _samples(x) -> np.ndarray:
    return x.data if isinstance(x, Video) else np.asarray(x, dtype=np.float64)


def bilinear_lift(y: np.ndarray, shape: tuple) -> np.ndarray:
    """Spatial bilinear upsampling of (T, h, w, C) to (T, H, W, C), half-pixel aligned."""
    T, h, w, C = y.shape
    if shape[0] != T or shape[3] != C:
        raise ShapeError(f'cannot lift {y.shape} to {shape}')
    if (h, w) == tuple(shape[1:3]):
        return y.copy()
    lifted = zoom(y, (1, shape[1] / h, shape[2] / w, 1), order=1, mode='nearest', grid_mode=True)
    if lifted.shape != tuple(shape):
        raise ShapeError(f'bilinear lift produced {lifted.shape}, expected {shape}')
    return lifted


def nearest_infill(y: np.ndarray, op: RandomInpainting) -> np.ndarray:
    """Fill every masked pixel with the nearest observed pixel of the same frame.

    Distance is Euclidean in pixel units; ties go to the first observed pixel
    in row-major order.
    """
    filled = np.array(y, dtype=np.float64)
    T, H, W, _ = filled.shape
    for t in range(T):
        kept = op.kept(t)
        if kept.all():
            continue
        sources = np.argwhere(kept)
        if not len(sources):
            logger.warning(f'frame {t} has no observed pixels, left unfilled')
            continue
        targets = np.argwhere(~kept)
        tree = cKDTree(sources)
        dist, _ = tree.query(targets)
        candidates = tree.query_ball_point(targets, dist + 1e-9)
        for (r, c), near in zip(targets, candidates):
            # sources are row-major, so the smallest exact-distance index wins ties
            d2 = ((sources[near] - (r, c)) ** 2).sum(axis=1)
            best = min(i for i, d in zip(near, d2) if d == d2.min())
            filled[t, r, c] = filled[t, sources[best][0], sources[best][1]]
    return filled


def lift_measurement(op: Degradation, y) -> np.ndarray:
    """CG starting point in the operator's input space."""
    payload = _payload(y)
    if payload.shape != op.output_shape:
        raise ShapeError(f'measurement shape {payload.shape} != operator output {op.output_shape}')
    if op.kind in ('sr4', 'stavg'):
        return bilinear_lift(payload, op.input_shape)
    if op.kind == 'inpaint':
        return nearest_infill(payload, op)
    # gblur, tavg (each output frame sits at its window's right end), identity
    return payload.copy()


def solve_prerestore(op: Degradation, y, task_iters: Optional[int] = None) -> Video:
    """Early-stopped CG on the normal equations A^T A x = A^T y from the lifted measurement."""
    if task_iters is None:
        task_iters = AvisConfig.PRERESTORE_ITERS.get(op.kind, 1)
    if task_iters < 0:
        raise ParameterError(f'task_iters must be >= 0, got {task_iters}')
    start = lift_measurement(op, y)
    if task_iters == 0:
        logger.info(f'pre-restoration for {op.kind}: lifted measurement used as is')
        return Video(start)
    result = cg_solve(lambda v: op.adjoint(op.apply(v)), op.adjoint(_payload(y)), start,
                      CgConfig(max_iters=task_iters))
    logger.info(f'pre-restoration for {op.kind}: {result.iterations} CG iterations, '
                f'relative residual {result.residual:.3e}')
    return Video(result.solution)


def proximal_objective(op: Degradation, y, x_hat, gamma: float, x) -> float:
    x = _samples(x)
    misfit = _payload(y) - op.apply(x)
    return 0.5 * gamma * float(np.vdot(misfit, misfit)) + 0.5 * float(np.sum((x - _samples(x_hat)) ** 2))


def solve_proximal(op: Degradation, y, x_hat, gamma: float = AvisConfig.GAMMA,
                   iters: int = AvisConfig.GUIDANCE_CG_ITERS,
                   callback: Optional[Callable[[int, np.ndarray], None]] = None) -> Video:
    """CG on (gamma A^T A + I) x = gamma A^T y + x_hat, warm-started at x_hat."""
    if gamma < 0:
        raise ParameterError(f'gamma must be >= 0, got {gamma}')
    x_hat = _samples(x_hat)
    if gamma == 0:
        return Video(x_hat.copy())
    b = gamma * op.adjoint(_payload(y)) + x_hat
    result = cg_solve(lambda v: apply_gram_plus_identity(op, gamma, v), b, x_hat, CgConfig(max_iters=iters),
                      callback=callback)
    return Video(result.solution)
