from abc import ABC, abstractmethod

import numpy as np

from avis.core import Chunk
from avis.misc.errors import ContextOrderError, ParameterError, SingularTimestepError
from avis.prior.context import ContextCache


def check_timestep(t: float) -> float:
    t = float(t)
    if t <= 0.0:
        raise SingularTimestepError(f'vector field is singular at t={t}')
    if t > 1.0:
        raise ParameterError(f'timestep must lie in (0, 1], got {t}')
    return t


class VectorFieldPrior(ABC):
    """Conditional vector field v(z_t, t; context) of a chunked flow model.

    Contexts are either the full history of the chunk's predecessors or empty
    (context-free evaluation).
    """
    analytic: bool = False
    context_capacity: int | None = None

    def empty_context(self) -> ContextCache:
        return ContextCache(capacity=self.context_capacity)

    @abstractmethod
    def _field(self, z_t: np.ndarray, t: float, ctx: ContextCache) -> np.ndarray:
        ...

    def summarize(self, chunk: np.ndarray) -> np.ndarray:
        return chunk

    def vector_field(self, z_t, t: float, ctx: ContextCache) -> np.ndarray:
        t = check_timestep(t)
        if isinstance(z_t, Chunk):
            if not ctx.empty and ctx.count != z_t.index - 1:
                raise ContextOrderError(f'chunk {z_t.index} evaluated with a context of {ctx.count} chunks')
            z_t = z_t.data
        return self._field(np.asarray(z_t, dtype=np.float64), t, ctx)

    def vector_field_batch(self, z_t: np.ndarray, t: np.ndarray, contexts: list) -> np.ndarray:
        """Field on a stack of chunks (B, L, h, w, C) with per-sample t and context."""
        return np.stack([self.vector_field(z, s, c) for z, s, c in zip(z_t, t, contexts)])

    def denoised_estimate(self, z_t, t: float, ctx: ContextCache) -> np.ndarray:
        data = z_t.data if isinstance(z_t, Chunk) else np.asarray(z_t, dtype=np.float64)
        return data - t * self.vector_field(z_t, t, ctx)

    def update_context(self, ctx: ContextCache, chunk: Chunk) -> ContextCache:
        if chunk.t != 0.0:
            raise ParameterError(f'only finalized chunks (t=0) enter the context, got t={chunk.t}')
        return ctx.append(chunk.index, self.summarize(chunk.data))


def vector_field(prior: VectorFieldPrior, z_t, t: float, ctx: ContextCache) -> np.ndarray:
    return prior.vector_field(z_t, t, ctx)


def denoised_estimate(prior: VectorFieldPrior, z_t, t: float, ctx: ContextCache) -> np.ndarray:
    return prior.denoised_estimate(z_t, t, ctx)


def update_context(prior: VectorFieldPrior, ctx: ContextCache, chunk: Chunk) -> ContextCache:
    return prior.update_context(ctx, chunk)
