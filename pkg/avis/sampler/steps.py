from dataclasses import dataclass

import numpy as np

from avis.codec import Codec
from avis.core import Chunk, LatentSeq, Measurement, NoiseStream, Video, gaussian_draw
from avis.logger_mesh import logger
from avis.misc.errors import ParameterError
from avis.operators import Degradation, Restricted
from avis.prior import ContextCache, VectorFieldPrior
from avis.solvers import solve_prerestore, solve_proximal


@dataclass(frozen=True)
class Guidance:
    """Pixel-space consistency problem of one chunk: its restricted operator and measurement rows."""
    op: Degradation
    y: Measurement
    codec: Codec
    gamma: float
    iters: int
    leading: bool


def init_estimate(op: Degradation, y, codec: Codec, task_iters: int | None = None,
                  chunk_len: int = 1) -> tuple[Video, LatentSeq]:
    x_init = solve_prerestore(op, y, task_iters)
    z_init = codec.encode(x_init, chunk_len=chunk_len, bucket='prerestore')
    return x_init, z_init


def initialize_chunk(chunk: Chunk, t0: float, stream: NoiseStream) -> Chunk:
    """Forward-diffuse a clean chunk to t0: (1 - t0) z + t0 xi."""
    if not 0.0 <= t0 <= 1.0:
        raise ParameterError(f't0 must lie in [0, 1], got {t0}')
    noise = gaussian_draw(stream, chunk.data.shape)
    return chunk.at((1.0 - t0) * chunk.data + t0 * noise, t0)


def chunk_guidance(op: Degradation, y: Measurement, codec: Codec, n: int, chunk_len: int,
                   prefix: np.ndarray, gamma: float, iters: int) -> Guidance:
    """Guidance for chunk n with the pixels before its span held at `prefix`."""
    start, stop = codec.pixel_span(n, chunk_len)
    sub = Restricted(op, start, stop)
    return Guidance(sub, sub.restrict_measurement(y, prefix[:start]), codec, gamma, iters, leading=n == 1)


def guided_estimate(z_hat: np.ndarray, guidance: Guidance) -> np.ndarray:
    """Decode, proximal solve in pixel space, re-encode."""
    codec = guidance.codec
    x_hat = codec.decode_array(z_hat, guidance.leading, bucket='guidance', pixel_shape=guidance.op.input_shape)
    x_tilde = solve_proximal(guidance.op, guidance.y, x_hat, guidance.gamma, guidance.iters)
    return codec.encode_array(x_tilde.data, guidance.leading, bucket='guidance')


def reverse_step(prior: VectorFieldPrior, chunk: Chunk, ctx: ContextCache, t_next: float,
                 stream: NoiseStream, guidance: Guidance | None = None) -> Chunk:
    t = chunk.t
    if not t > t_next >= 0.0:
        raise ParameterError(f'reverse step needs t > t_next >= 0, got {t} -> {t_next}')
    z_hat = prior.denoised_estimate(chunk, t, ctx)
    if guidance is not None:
        z_hat = guided_estimate(z_hat, guidance)
    if t_next == 0.0:
        return chunk.at(z_hat, 0.0)
    noise = gaussian_draw(stream, z_hat.shape)
    logger.debug(f'chunk {chunk.index}: t {t:.4f} -> {t_next:.4f}')
    return chunk.at((1.0 - t_next) * z_hat + t_next * noise, t_next)
