import numpy as np

from avis.codec import Codec
from avis.core import Chunk, LatentSeq, init_stream, merge_chunks, renoise_stream, split_chunks
from avis.logger_mesh import logger
from avis.misc.errors import ParameterError, ShapeError
from avis.operators import Degradation
from avis.prior import ContextCache, VectorFieldPrior
from avis.sampler.config import RunConfig
from avis.sampler.steps import chunk_guidance, init_estimate, initialize_chunk, reverse_step
from avis.sampler.trace import RunTrace


def _prepare(cfg: RunConfig, op: Degradation, y, codec: Codec, trace: RunTrace):
    expected = codec.pixel_frames(codec.latent_frames(op.input_shape[0]))
    if expected != op.input_shape[0]:
        raise ShapeError(f'{op.input_shape[0]} pixel frames do not fit codec {codec}')
    x_init, z_init = init_estimate(op, y, codec, cfg.prerestore_iters, cfg.chunk_len)
    trace.record('prerestore', 0)
    chunks = split_chunks(z_init)
    logger.info(f'{cfg.mode}: {len(chunks)} chunks of {cfg.chunk_len} latent frames, '
                f'{cfg.steps} steps from t0={cfg.t0}')
    return x_init, chunks


def _span_shape(codec: Codec, op: Degradation, n: int, chunk_len: int) -> tuple:
    start, stop = codec.pixel_span(n, chunk_len)
    return (stop - start,) + op.input_shape[1:]


def _streaming(cfg: RunConfig, op: Degradation, y, prior: VectorFieldPrior,
               codec: Codec) -> tuple[LatentSeq, RunTrace]:
    trace = RunTrace(codec)
    _, chunks = _prepare(cfg, op, y, codec, trace)
    ctx = prior.empty_context()
    displayed = np.zeros((0,) + op.input_shape[1:])
    finals = []
    for chunk in chunks:
        n = chunk.index
        state = initialize_chunk(chunk, cfg.t0, init_stream(cfg.seed, n))
        guidance = None
        if cfg.guided(n):
            guidance = chunk_guidance(op, y, codec, n, cfg.chunk_len, displayed, cfg.gamma, cfg.guidance_iters)
        step_ctx = ctx if cfg.use_context else prior.empty_context()
        for k, _, t_next in cfg.schedule.pairs():
            state = reverse_step(prior, state, step_ctx, t_next, renoise_stream(cfg.seed, n, k), guidance)
            trace.record('guidance' if guidance else 'step', n, k)
        pixels = codec.decode_array(state.data, leading=n == 1, bucket='display',
                                    pixel_shape=_span_shape(codec, op, n, cfg.chunk_len))
        trace.display(n, pixels)
        logger.info(f'{cfg.mode}: chunk {n} displayed after {trace.reverse_steps} reverse steps')
        displayed = np.concatenate([displayed, pixels], axis=0)
        ctx = prior.update_context(ctx, state)
        finals.append(state)
    return merge_chunks(finals, cfg.chunk_len), trace


def run_avis(cfg: RunConfig, op: Degradation, y, prior: VectorFieldPrior,
             codec: Codec) -> tuple[LatentSeq, RunTrace]:
    if cfg.mode != 'avis':
        raise ParameterError(f'run_avis needs mode=avis, got {cfg.mode!r}')
    return _streaming(cfg, op, y, prior, codec)


def run_flash(cfg: RunConfig, op: Degradation, y, prior: VectorFieldPrior,
              codec: Codec) -> tuple[LatentSeq, RunTrace]:
    """Guidance on chunk 1 only (flash) or on every P-th chunk starting at 1 (flash_periodic)."""
    if cfg.mode not in ('flash', 'flash_periodic'):
        raise ParameterError(f'run_flash needs mode=flash or flash_periodic, got {cfg.mode!r}')
    return _streaming(cfg, op, y, prior, codec)


def _live_context(prior: VectorFieldPrior, states: list[Chunk]) -> ContextCache:
    ctx = prior.empty_context()
    for state in states:
        ctx = ctx.append(state.index, prior.summarize(state.data))
    return ctx


def run_joint_baseline(cfg: RunConfig, op: Degradation, y, prior: VectorFieldPrior,
                       codec: Codec) -> tuple[LatentSeq, RunTrace]:
    """All chunks advance together one step at a time; nothing is shown until every chunk is done.

    Chunk n at step k is conditioned on its predecessors' states at the start
    of step k, and guided against the pre-restored prefix.
    """
    if cfg.mode != 'joint':
        raise ParameterError(f'run_joint_baseline needs mode=joint, got {cfg.mode!r}')
    trace = RunTrace(codec)
    x_init, chunks = _prepare(cfg, op, y, codec, trace)
    states = [initialize_chunk(c, cfg.t0, init_stream(cfg.seed, c.index)) for c in chunks]
    guidance = [chunk_guidance(op, y, codec, c.index, cfg.chunk_len, x_init.data, cfg.gamma, cfg.guidance_iters)
                for c in chunks]
    for k, _, t_next in cfg.schedule.pairs():
        current = list(states)
        for i, state in enumerate(current):
            ctx = _live_context(prior, current[:i]) if cfg.use_context else prior.empty_context()
            states[i] = reverse_step(prior, state, ctx, t_next, renoise_stream(cfg.seed, state.index, k),
                                     guidance[i])
            trace.record('guidance', state.index, k)
    for state in states:
        span = _span_shape(codec, op, state.index, cfg.chunk_len)
        trace.display(state.index, codec.decode_array(state.data, leading=state.index == 1, bucket='display',
                                                      pixel_shape=span))
    logger.info(f'joint: {len(states)} chunks displayed after {trace.reverse_steps} reverse steps')
    return merge_chunks(states, cfg.chunk_len), trace


def run_mode(cfg: RunConfig, op: Degradation, y, prior: VectorFieldPrior,
             codec: Codec) -> tuple[LatentSeq, RunTrace]:
    if cfg.mode == 'avis':
        return run_avis(cfg, op, y, prior, codec)
    if cfg.mode == 'joint':
        return run_joint_baseline(cfg, op, y, prior, codec)
    return run_flash(cfg, op, y, prior, codec)
