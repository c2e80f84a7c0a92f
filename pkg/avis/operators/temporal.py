import numpy as np

from avis.operators.main import Degradation
from avis.operators.spatial import box_mean, box_mean_adjoint
from avis.misc.errors import ParameterError, ShapeError


def causal_average_matrix(frames: int, window: int) -> np.ndarray:
    """Row t averages frames max(0, t-w+1)..t; the truncated start rows renormalize by their length."""
    if window < 1:
        raise ParameterError(f'window must be >= 1, got {window}')
    M = np.zeros((frames, frames))
    for t in range(frames):
        lo = max(0, t - window + 1)
        M[t, lo:t + 1] = 1.0 / (t + 1 - lo)
    return M


def _mix_frames(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.tensordot(M, x, axes=(1, 0))


class TemporalAverage(Degradation):
    kind = 'tavg'

    def __init__(self, shape: tuple, window: int = 7):
        self.window = window
        self.matrix = causal_average_matrix(shape[0], window)
        super().__init__(shape, shape)

    def _forward(self, x):
        return _mix_frames(self.matrix, x)

    def _adjoint(self, u):
        return _mix_frames(self.matrix.T, u)

    def truncated(self, frames):
        return TemporalAverage((frames,) + self.input_shape[1:], self.window)

    def params(self):
        return {'window': self.window}


class SpatioTemporalAverage(Degradation):
    kind = 'stavg'

    def __init__(self, shape: tuple, factor: int = 4, window: int = 4):
        T, H, W, C = shape
        if H % factor or W % factor:
            raise ShapeError(f'{H}x{W} frame is not divisible by spatial factor {factor}')
        self.factor, self.window = factor, window
        self.matrix = causal_average_matrix(T, window)
        super().__init__(shape, (T, H // factor, W // factor, C))

    def _forward(self, x):
        return _mix_frames(self.matrix, box_mean(x, self.factor))

    def _adjoint(self, u):
        return box_mean_adjoint(_mix_frames(self.matrix.T, u), self.factor)

    def truncated(self, frames):
        return SpatioTemporalAverage((frames,) + self.input_shape[1:], self.factor, self.window)

    def params(self):
        return {'factor': self.factor, 'window': self.window}
