import numpy as np

from avis.core import gaussian_draw
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError
from avis.prior.base import VectorFieldPrior, check_timestep
from avis.prior.context import ContextCache


def posterior_coefficient(t: float, variance: float) -> float:
    """c(t) = (1-t) s^2 / ((1-t)^2 s^2 + t^2): weight of z_t in E[z_0 | z_t] for z_0 ~ N(m, s^2)."""
    return (1.0 - t) * variance / ((1.0 - t) ** 2 * variance + t ** 2)


class GaussARPrior(VectorFieldPrior):
    """First-order Gaussian chunk law, z^1 ~ N(mu0, sigma_p^2), z^n | z^{n-1} ~ N(rho z^{n-1}, sigma_c^2).

    The vector field is the exact conditional expectation of z_1 - z_0 given
    z_t = (1 - t) z_0 + t z_1, so it is affine in z_t and in the previous chunk.
    """
    analytic = True
    context_capacity = 1

    def __init__(self, rho: float = AvisConfig.RHO, sigma_p: float = AvisConfig.SIGMA_P,
                 mu0: float = AvisConfig.MU0):
        if abs(rho) >= 1:
            raise ParameterError(f'|rho| must be < 1, got {rho}')
        if sigma_p <= 0:
            raise ParameterError(f'sigma_p must be > 0, got {sigma_p}')
        self.rho, self.sigma_p, self.mu0 = float(rho), float(sigma_p), float(mu0)

    @property
    def sigma_c(self) -> float:
        return float(np.sqrt(1.0 - self.rho ** 2) * self.sigma_p)

    def variance(self, conditional: bool) -> float:
        return self.sigma_c ** 2 if conditional else self.sigma_p ** 2

    def prior_mean(self, ctx: ContextCache, shape: tuple):
        if ctx.empty:
            return np.full(shape, self.mu0)
        return self.rho * ctx.latest()

    def posterior_mean(self, z_t: np.ndarray, t: float, ctx: ContextCache) -> np.ndarray:
        m = self.prior_mean(ctx, z_t.shape)
        c = posterior_coefficient(t, self.variance(not ctx.empty))
        return m + c * (z_t - (1.0 - t) * m)

    def _field(self, z_t, t, ctx):
        return (z_t - self.posterior_mean(z_t, t, ctx)) / t

    def vector_field_batch(self, z_t, t, contexts):
        z_t = np.asarray(z_t, dtype=np.float64)
        t = np.array([check_timestep(s) for s in t])
        means = np.stack([self.prior_mean(c, z_t.shape[1:]) for c in contexts])
        variances = np.array([self.variance(not c.empty) for c in contexts])
        tb = t.reshape((-1,) + (1,) * (z_t.ndim - 1))
        c = posterior_coefficient(tb, variances.reshape(tb.shape))
        m_post = means + c * (z_t - (1.0 - tb) * means)
        return (z_t - m_post) / tb

    def lipschitz_z(self, t: float, conditional: bool = True) -> float:
        """|dv/dz_t| = |1 - c(t)| / t."""
        t = check_timestep(t)
        return abs(1.0 - posterior_coefficient(t, self.variance(conditional))) / t

    def lipschitz_ctx(self, t: float) -> float:
        """|dv/dz^{n-1}| = |rho| |1 - c(t)(1 - t)| / t, with the conditional variance."""
        t = check_timestep(t)
        return abs(self.rho) * abs(1.0 - posterior_coefficient(t, self.variance(True)) * (1.0 - t)) / t

    def sample_chunk(self, stream, shape: tuple, ctx: ContextCache) -> np.ndarray:
        std = np.sqrt(self.variance(not ctx.empty))
        return self.prior_mean(ctx, shape) + std * gaussian_draw(stream, shape)

    def __repr__(self):
        return f'<GaussARPrior rho={self.rho} sigma_p={self.sigma_p} mu0={self.mu0}>'
