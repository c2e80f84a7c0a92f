from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.misc.errors import DivergenceError, ParameterError, ShapeError


@dataclass(frozen=True)
class CgConfig:
    max_iters: int
    rel_residual_tol: float = AvisConfig.CG_TOL
    record_residuals: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ParameterError(f'max_iters must be >= 1, got {self.max_iters}')
        if self.rel_residual_tol < 0:
            raise ParameterError(f'tolerance must be >= 0, got {self.rel_residual_tol}')


@dataclass
class CgResult:
    solution: np.ndarray
    iterations: int
    residual: float
    history: list = field(default_factory=list)


def _check_finite(*arrays) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise DivergenceError('conjugate gradient produced non-finite values')


def cg_solve(apply_A: Callable[[np.ndarray], np.ndarray], b, x0, cfg: CgConfig,
             callback: Optional[Callable[[int, np.ndarray], None]] = None) -> CgResult:
    """Conjugate gradient for a symmetric positive (semi-)definite map, warm-started at x0.

    Stops after cfg.max_iters iterations or once ||b - Ax|| / ||b|| <= tol
    (absolute residual when b = 0).
    """
    b = np.asarray(b, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    if x.shape != b.shape:
        raise ShapeError(f'x0 shape {x.shape} != b shape {b.shape}')
    _check_finite(b, x)

    b_norm = float(np.linalg.norm(b))
    scale = b_norm if b_norm > 0 else 1.0
    r = b - apply_A(x)
    rs = float(np.vdot(r, r))
    _check_finite(r)
    rel = np.sqrt(rs) / scale
    history = [rel] if cfg.record_residuals else []
    p = r.copy()

    iterations = 0
    while iterations < cfg.max_iters and rel > cfg.rel_residual_tol:
        Ap = apply_A(p)
        pAp = float(np.vdot(p, Ap))
        _check_finite(Ap)
        if pAp <= 0:
            logger.warning(f'CG breakdown at iteration {iterations}: p^T A p = {pAp:.3e}')
            break
        alpha = rs / pAp
        x = x + alpha * p
        iterations += 1
        if iterations % AvisConfig.CG_RECOMPUTE_EVERY == 0:
            r = b - apply_A(x)
        else:
            r = r - alpha * Ap
        rs_new = float(np.vdot(r, r))
        _check_finite(x, r)
        rel = np.sqrt(rs_new) / scale
        if cfg.record_residuals:
            history.append(rel)
        if callback is not None:
            callback(iterations, x)
        p = r + (rs_new / rs) * p
        rs = rs_new

    return CgResult(solution=x, iterations=iterations, residual=float(rel), history=history)
