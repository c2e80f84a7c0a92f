from dataclasses import dataclass

import numpy as np

from avis.core import Chunk, LatentSeq, NoiseStream, gaussian_draw, split_chunks
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError, TrainingError
from avis.prior.base import VectorFieldPrior
from avis.prior.learned import LearnedPrior


@dataclass(frozen=True)
class CfmBatch:
    z0: np.ndarray
    z1: np.ndarray
    t: np.ndarray
    contexts: tuple

    @property
    def z_t(self) -> np.ndarray:
        tb = self.t.reshape((-1,) + (1,) * (self.z0.ndim - 1))
        return (1.0 - tb) * self.z0 + tb * self.z1

    @property
    def target(self) -> np.ndarray:
        return self.z1 - self.z0

    def __len__(self):
        return self.z0.shape[0]


def build_training_pairs(prior: VectorFieldPrior, sequences: list[LatentSeq]) -> list[tuple]:
    """(clean chunk, context of its predecessors) for every chunk of every sequence."""
    pairs = []
    for seq in sequences:
        ctx = prior.empty_context()
        for chunk in split_chunks(seq):
            pairs.append((chunk.data, ctx))
            ctx = prior.update_context(ctx, Chunk(chunk.index, chunk.data))
    return pairs


def draw_cfm_batch(pairs: list[tuple], stream: NoiseStream) -> CfmBatch:
    """t uniform on (0, 1], z_1 standard normal, one draw per pair."""
    if not pairs:
        raise ParameterError('CFM batch needs at least one sample')
    z0 = np.stack([p[0] for p in pairs])
    t = 1.0 - stream.uniform(len(pairs))
    z1 = gaussian_draw(stream, z0.shape)
    return CfmBatch(z0=z0, z1=z1, t=t, contexts=tuple(p[1] for p in pairs))


def cfm_objective(prior: VectorFieldPrior, batch: CfmBatch) -> float:
    v = prior.vector_field_batch(batch.z_t, batch.t, list(batch.contexts))
    return float(np.sum((v - batch.target) ** 2)) / len(batch)


def cfm_loss(prior: VectorFieldPrior, pairs: list[tuple], stream: NoiseStream) -> float:
    return cfm_objective(prior, draw_cfm_batch(pairs, stream))


def denoising_error(prior: VectorFieldPrior, batch: CfmBatch) -> float:
    """Mean squared distance between z_t - t v and the clean chunk."""
    v = prior.vector_field_batch(batch.z_t, batch.t, list(batch.contexts))
    tb = batch.t.reshape((-1,) + (1,) * (batch.z0.ndim - 1))
    return float(np.sum((batch.z_t - tb * v - batch.z0) ** 2)) / len(batch)


def train(prior: LearnedPrior, pairs: list[tuple], *, epochs: int = AvisConfig.EPOCHS,
          batch_size: int = AvisConfig.BATCH_SIZE, learning_rate: float = AvisConfig.LEARNING_RATE,
          seed: int = 0) -> tuple[LearnedPrior, list[float]]:
    """Minibatch gradient descent on the CFM loss.

    The step is divided by the number of spatial locations, since the
    per-location network sees every pixel of the chunk as a sample.
    Returns the trained prior and the mean loss of every epoch.
    """
    if not pairs:
        raise ParameterError('training set is empty')
    if epochs < 1 or batch_size < 1 or learning_rate < 0:
        raise ParameterError(f'bad hyperparameters: epochs={epochs}, batch_size={batch_size}, lr={learning_rate}')
    _, h, w, _ = pairs[0][0].shape
    step = learning_rate / (h * w)
    params = np.array(prior.params)
    history = []
    for epoch in range(epochs):
        order = NoiseStream(f'train:{epoch}', seed).permutation(len(pairs))
        losses = []
        for b, start in enumerate(range(0, len(pairs), batch_size)):
            members = [pairs[i] for i in order[start:start + batch_size]]
            batch = draw_cfm_batch(members, NoiseStream(f'cfm:{epoch}:{b}', seed))
            loss, grad = prior.loss_and_grad(batch, params)
            if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
                raise TrainingError(f'non-finite loss at epoch {epoch}, batch {b}')
            params = params - step * grad
            losses.append(loss)
        history.append(float(np.mean(losses)))
        logger.info(f'prior training epoch {epoch + 1}/{epochs}: loss {history[-1]:.5f}')
    return prior.with_params(params), history
