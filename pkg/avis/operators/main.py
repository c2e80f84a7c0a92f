from abc import ABC, abstractmethod

import numpy as np

from avis.core import Video, Measurement, NoiseStream, gaussian_draw
from avis.misc.errors import ShapeError


def _samples(x) -> np.ndarray:
    return x.data if isinstance(x, Video) else np.asarray(x, dtype=np.float64)


class Degradation(ABC):
    """Linear operator A: input space (T, H, W, C) -> output space, with its exact adjoint."""
    kind: str = ''

    def __init__(self, input_shape: tuple, output_shape: tuple):
        self.input_shape = tuple(int(d) for d in input_shape)
        self.output_shape = tuple(int(d) for d in output_shape)

    @abstractmethod
    def _forward(self, x: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _adjoint(self, u: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def truncated(self, frames: int) -> 'Degradation':
        """Same operator acting on the first `frames` frames only."""

    def params(self) -> dict:
        return {}

    def apply(self, x) -> np.ndarray:
        x = _samples(x)
        if x.shape != self.input_shape:
            raise ShapeError(f'{self.kind}: input shape {x.shape} != {self.input_shape}')
        return self._forward(x)

    def adjoint(self, u) -> np.ndarray:
        u = _samples(u)
        if u.shape != self.output_shape:
            raise ShapeError(f'{self.kind}: adjoint input shape {u.shape} != {self.output_shape}')
        return self._adjoint(u)

    def gram_plus_identity(self, gamma: float, x) -> np.ndarray:
        x = _samples(x)
        return gamma * self.adjoint(self.apply(x)) + x

    def __repr__(self):
        return f'<{type(self).__name__} {self.kind} {self.input_shape} -> {self.output_shape}>'


class IdentityDegradation(Degradation):
    kind = 'identity'

    def __init__(self, shape: tuple):
        super().__init__(shape, shape)

    def _forward(self, x):
        return x.copy()

    def _adjoint(self, u):
        return u.copy()

    def truncated(self, frames):
        return IdentityDegradation((frames,) + self.input_shape[1:])


class Restricted(Degradation):
    """Chunk view S A E of `op`: only frames [start, stop) vary, earlier frames are a fixed prefix.

    Output rows are the measurement frames [start, stop), which for every
    operator here are exactly the rows influenced by the chunk's own frames
    and the causal past.
    """

    def __init__(self, op: Degradation, start: int, stop: int):
        self.base = op.truncated(stop)
        self.kind = op.kind
        self.start, self.stop = start, stop
        super().__init__((stop - start,) + self.base.input_shape[1:],
                         (stop - start,) + self.base.output_shape[1:])

    def _embed(self, x):
        full = np.zeros(self.base.input_shape)
        full[self.start:] = x
        return full

    def _forward(self, x):
        return self.base.apply(self._embed(x))[self.start:]

    def _adjoint(self, u):
        full = np.zeros(self.base.output_shape)
        full[self.start:] = u
        return self.base.adjoint(full)[self.start:]

    def truncated(self, frames):
        raise ShapeError('a restricted operator cannot be truncated further')

    def offset(self, prefix: np.ndarray) -> np.ndarray:
        """Contribution of the fixed prefix frames to the chunk's measurement rows."""
        if prefix.shape[0] != self.start:
            raise ShapeError(f'prefix has {prefix.shape[0]} frames, chunk starts at {self.start}')
        full = np.zeros(self.base.input_shape)
        full[:self.start] = prefix
        return self.base.apply(full)[self.start:]

    def restrict_measurement(self, y: Measurement, prefix: np.ndarray) -> Measurement:
        payload = y.payload[self.start:self.stop] - self.offset(prefix)
        return Measurement(payload, y.noise_sigma)


def apply(op: Degradation, x) -> np.ndarray:
    return op.apply(x)


def adjoint(op: Degradation, u) -> np.ndarray:
    return op.adjoint(u)


def apply_gram_plus_identity(op: Degradation, gamma: float, x) -> np.ndarray:
    return op.gram_plus_identity(gamma, x)


def measure(op: Degradation, x, noise_sigma: float = 0.0, seed: int = 0) -> Measurement:
    payload = op.apply(x)
    if noise_sigma > 0:
        payload = payload + noise_sigma * gaussian_draw(NoiseStream('measurement', seed), payload.shape)
    return Measurement(payload, noise_sigma)
