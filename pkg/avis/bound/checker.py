import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from avis.core import Chunk, NoiseStream, Schedule, gaussian_draw, init_stream, make_schedule, renoise_stream
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError, ShapeError, UnsupportedPriorError
from avis.prior import ContextCache, GaussARPrior, VectorFieldPrior


@dataclass(frozen=True)
class BoundCoefficients:
    lambdas: tuple
    betas: tuple
    Lambda: float
    B: float


@dataclass
class BoundReport:
    seed: int
    chunk: int
    schedule: Schedule
    eps0: float
    errors: list
    delta: float
    L_z: list
    L_c: list
    coefficients: BoundCoefficients
    slack: float = 0.0
    satisfied: bool = False
    finals: tuple = ()

    @property
    def eps_t0(self) -> float:
        return self.errors[0]

    @property
    def eps_final(self) -> float:
        return self.errors[-1]

    @property
    def bound(self) -> float:
        return self.coefficients.Lambda * self.eps0 + self.coefficients.B * self.delta


def bound_coefficients(schedule: Schedule, L_z: list, L_c: list) -> BoundCoefficients:
    """lambda_k = (1 - t_{k+1})(1 + t_k L_z,k), beta_k = (1 - t_{k+1}) t_k L_c,k,
    Lambda_K = (1 - t0) prod lambda, B_K = sum_r (prod_{l > r} lambda_l) beta_r."""
    if len(L_z) != schedule.steps or len(L_c) != schedule.steps:
        raise ShapeError(f'need {schedule.steps} Lipschitz constants per argument')
    lambdas, betas = [], []
    for k, t, t_next in schedule.pairs():
        lambdas.append((1.0 - t_next) * (1.0 + t * L_z[k]))
        betas.append((1.0 - t_next) * t * L_c[k])
    B = 0.0
    for r, beta in enumerate(betas):
        B += float(np.prod(lambdas[r + 1:])) * beta
    Lambda = (1.0 - schedule.t0) * float(np.prod(lambdas))
    return BoundCoefficients(tuple(lambdas), tuple(betas), Lambda, B)


def lipschitz_exact(prior: VectorFieldPrior, schedule: Schedule, conditional: bool = True) -> tuple[list, list]:
    """Exact constants of the affine Gaussian field at every t_k > 0.

    conditional=False gives the first chunk's constants (no context, L_c = 0).
    """
    if not isinstance(prior, GaussARPrior):
        raise UnsupportedPriorError(f'{prior!r} has no closed-form Lipschitz constants')
    grid = [t for _, t, _ in schedule.pairs()]
    L_z = [prior.lipschitz_z(t, conditional) for t in grid]
    L_c = [prior.lipschitz_ctx(t) if conditional else 0.0 for t in grid]
    return L_z, L_c


def _single_context(prior: VectorFieldPrior, data: np.ndarray) -> ContextCache:
    return prior.empty_context().append(1, prior.summarize(data))


def lipschitz_empirical(prior: VectorFieldPrior, schedule: Schedule,
                        trials: int = AvisConfig.LIPSCHITZ_TRIALS, chunk_shape: tuple = (3, 4, 4, 1),
                        seed: int = 0) -> tuple[list, list]:
    """Largest observed ||dv|| / ||d input|| over random pairs; a lower bound on the true constants."""
    if trials < 1:
        raise ParameterError(f'trials must be >= 1, got {trials}')
    stream = NoiseStream('lipschitz', seed)
    L_z, L_c = [], []
    for _, t, _ in schedule.pairs():
        best_z = best_c = 0.0
        for _ in range(trials):
            z, dz = gaussian_draw(stream, chunk_shape), gaussian_draw(stream, chunk_shape)
            c, dc = gaussian_draw(stream, chunk_shape), gaussian_draw(stream, chunk_shape)
            ctx = _single_context(prior, c)
            v = prior.vector_field(Chunk(2, z), t, ctx)
            dv_z = prior.vector_field(Chunk(2, z + dz), t, ctx) - v
            dv_c = prior.vector_field(Chunk(2, z), t, _single_context(prior, c + dc)) - v
            best_z = max(best_z, float(np.linalg.norm(dv_z) / np.linalg.norm(dz)))
            best_c = max(best_c, float(np.linalg.norm(dv_c) / np.linalg.norm(dc)))
        L_z.append(best_z)
        L_c.append(best_c)
    return L_z, L_c


def context_mismatch(ctx: ContextCache, ctx_target: ContextCache) -> float:
    """Mean Euclidean distance between corresponding cached chunks."""
    if len(ctx) != len(ctx_target):
        raise ShapeError(f'contexts hold {len(ctx)} and {len(ctx_target)} chunks')
    if ctx.empty:
        return 0.0
    return float(np.mean([np.linalg.norm(a - b) for a, b in zip(ctx.entries, ctx_target.entries)]))


def coupled_run(prior: VectorFieldPrior, schedule: Schedule, z_init: np.ndarray, z_target: np.ndarray,
                ctx: ContextCache, ctx_target: ContextCache, seed: int = 0,
                L: tuple[list, list] | None = None) -> BoundReport:
    """Two unguided trajectories of the same chunk sharing every noise draw.

    Each state is kept as its deterministic part plus the shared noise term,
    so the recorded errors are differences of deterministic parts only.
    L overrides the Lipschitz constants; by default the exact ones are used.
    """
    if z_init.shape != z_target.shape:
        raise ShapeError(f'trajectory shapes differ: {z_init.shape} vs {z_target.shape}')
    if ctx.count != ctx_target.count:
        raise ShapeError(f'contexts cover {ctx.count} and {ctx_target.count} chunks')
    n = ctx.count + 1
    shape = z_init.shape
    shared = schedule.t0 * gaussian_draw(init_stream(seed, n), shape)
    mean_a, mean_b = (1.0 - schedule.t0) * z_init, (1.0 - schedule.t0) * z_target
    errors = [float(np.linalg.norm(mean_a - mean_b))]
    for k, t, t_next in schedule.pairs():
        a, b = Chunk(n, mean_a + shared, t), Chunk(n, mean_b + shared, t)
        mean_a = (1.0 - t_next) * prior.denoised_estimate(a, t, ctx)
        mean_b = (1.0 - t_next) * prior.denoised_estimate(b, t, ctx_target)
        shared = t_next * gaussian_draw(renoise_stream(seed, n, k), shape) if t_next > 0 else np.zeros(shape)
        errors.append(float(np.linalg.norm(mean_a - mean_b)))
    L_z, L_c = L if L is not None else lipschitz_exact(prior, schedule, conditional=not ctx.empty)
    report = BoundReport(seed=seed, chunk=n, schedule=schedule, eps0=float(np.linalg.norm(z_init - z_target)),
                         errors=errors, delta=context_mismatch(ctx, ctx_target), L_z=list(L_z), L_c=list(L_c),
                         coefficients=bound_coefficients(schedule, L_z, L_c),
                         finals=(mean_a + shared, mean_b + shared))
    verify_bound(report)
    return report


def verify_bound(report: BoundReport, slack: float = AvisConfig.BOUND_SLACK) -> tuple[bool, float]:
    """eps_K <= Lambda_K eps0 + B_K delta, up to an absolute slack; returns (holds, margin)."""
    margin = report.bound + slack - report.eps_final
    report.slack, report.satisfied = margin, margin >= 0.0
    if not report.satisfied:
        logger.warning(f'bound violated for seed {report.seed}, chunk {report.chunk}: '
                       f'eps_K={report.eps_final:.6e} > {report.bound:.6e}')
    return report.satisfied, margin


def sweep_bound(prior: GaussARPrior, schedule: Schedule, seeds: int = AvisConfig.BOUND_SEEDS,
                chunk_shape: tuple = (3, 8, 8, 1), base_seed: int = 0) -> list[BoundReport]:
    """Seeded coupled runs on chunk 2 with random initial and context errors."""
    if seeds < 1:
        raise ParameterError(f'seed count must be >= 1, got {seeds}')
    reports = []
    for seed in range(base_seed, base_seed + seeds):
        stream = NoiseStream(f'bound:{seed}', seed)
        previous = prior.sample_chunk(stream, chunk_shape, prior.empty_context())
        ctx_target = _single_context(prior, previous)
        z_target = prior.sample_chunk(stream, chunk_shape, ctx_target)
        init_scale, ctx_scale = stream.uniform(2)
        z_init = z_target + init_scale * gaussian_draw(stream, chunk_shape)
        ctx = _single_context(prior, previous + ctx_scale * gaussian_draw(stream, chunk_shape))
        reports.append(coupled_run(prior, schedule, z_init, z_target, ctx, ctx_target, seed=seed))
    worst = min(r.slack for r in reports)
    failed = sum(not r.satisfied for r in reports)
    logger.info(f'bound sweep over {seeds} seeds: {failed} violations, worst slack {worst:.3e}')
    return reports


def t0_sensitivity(t0s: list, steps: int, L_z: float | None = None, L_c: float | None = None,
                   prior: GaussARPrior | None = None) -> list[tuple[float, float, float]]:
    """(t0, Lambda_K, B_K) per start time, from constant constants or from the prior at each grid point."""
    rows = []
    for t0 in t0s:
        schedule = make_schedule(t0, steps)
        if prior is not None:
            lz, lc = lipschitz_exact(prior, schedule)
        elif L_z is not None and L_c is not None:
            lz, lc = [L_z] * steps, [L_c] * steps
        else:
            raise ParameterError('t0_sensitivity needs constants or a prior')
        coefficients = bound_coefficients(schedule, lz, lc)
        rows.append((t0, coefficients.Lambda, coefficients.B))
    return rows


def write_bound_csv(reports: list[BoundReport], path: str | Path) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['seed', 'chunk', 'row', 't', 'eps', 'L_z', 'L_c', 'lambda', 'beta',
                         'eps0', 'delta', 'Lambda_K', 'B_K', 'bound', 'slack', 'satisfied'])
        for r in reports:
            c = r.coefficients
            for k, t, _ in r.schedule.pairs():
                writer.writerow([r.seed, r.chunk, f'step{k}', t, r.errors[k + 1], r.L_z[k], r.L_c[k],
                                 c.lambdas[k], c.betas[k], '', '', '', '', '', '', ''])
            writer.writerow([r.seed, r.chunk, 'summary', 0.0, r.eps_final, '', '', '', '',
                             r.eps0, r.delta, c.Lambda, c.B, r.bound, r.slack, int(r.satisfied)])
