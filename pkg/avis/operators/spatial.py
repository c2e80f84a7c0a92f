import numpy as np
from scipy.ndimage import correlate1d

from avis.core import NoiseStream
from avis.misc.errors import ParameterError, ShapeError
from avis.operators.main import Degradation


def box_mean(x: np.ndarray, factor: int) -> np.ndarray:
    T, H, W, C = x.shape
    if H % factor or W % factor:
        raise ShapeError(f'{H}x{W} frame is not divisible by spatial factor {factor}')
    return x.reshape(T, H // factor, factor, W // factor, factor, C).mean(axis=(2, 4))


def box_mean_adjoint(u: np.ndarray, factor: int) -> np.ndarray:
    return np.repeat(np.repeat(u, factor, axis=1), factor, axis=2) / factor ** 2


class SuperResolution(Degradation):
    kind = 'sr4'

    def __init__(self, shape: tuple, factor: int = 4):
        T, H, W, C = shape
        if H % factor or W % factor:
            raise ShapeError(f'{H}x{W} frame is not divisible by scale factor {factor}')
        self.factor = factor
        super().__init__(shape, (T, H // factor, W // factor, C))

    def _forward(self, x):
        return box_mean(x, self.factor)

    def _adjoint(self, u):
        return box_mean_adjoint(u, self.factor)

    def truncated(self, frames):
        return SuperResolution((frames,) + self.input_shape[1:], self.factor)

    def params(self):
        return {'factor': self.factor}


def gaussian_kernel_1d(size: int, sigma: float) -> np.ndarray:
    if size < 1 or size % 2 == 0:
        raise ParameterError(f'kernel size must be odd and positive, got {size}')
    if sigma <= 0:
        raise ParameterError(f'kernel sigma must be > 0, got {sigma}')
    r = size // 2
    taps = np.exp(-0.5 * (np.arange(-r, r + 1) / sigma) ** 2)
    return taps / taps.sum()


class GaussianBlur(Degradation):
    """Separable truncated Gaussian, replicate padding; adjoint folds the padding back onto the border."""
    kind = 'gblur'

    def __init__(self, shape: tuple, kernel_size: int = 9, sigma: float = 1.5):
        self.kernel_size, self.sigma = kernel_size, sigma
        self.taps = gaussian_kernel_1d(kernel_size, sigma)
        super().__init__(shape, shape)

    @property
    def kernel(self) -> np.ndarray:
        return np.outer(self.taps, self.taps)

    def _blur_axis(self, x, axis):
        r = self.kernel_size // 2
        pad = [(0, 0)] * x.ndim
        pad[axis] = (r, r)
        padded = np.pad(x, pad, mode='edge')
        out = correlate1d(padded, self.taps, axis=axis, mode='constant', cval=0.0)
        return np.take(out, np.arange(r, r + x.shape[axis]), axis=axis)

    def _blur_axis_adjoint(self, u, axis):
        r = self.kernel_size // 2
        n = u.shape[axis]
        pad = [(0, 0)] * u.ndim
        pad[axis] = (r, r)
        spread = correlate1d(np.pad(u, pad), self.taps[::-1], axis=axis, mode='constant', cval=0.0)
        out = np.take(spread, np.arange(r, r + n), axis=axis)
        head = np.take(spread, np.arange(0, r), axis=axis).sum(axis=axis)
        tail = np.take(spread, np.arange(r + n, 2 * r + n), axis=axis).sum(axis=axis)
        index = [slice(None)] * u.ndim
        index[axis] = 0
        out[tuple(index)] += head
        index[axis] = n - 1
        out[tuple(index)] += tail
        return out

    def _forward(self, x):
        return self._blur_axis(self._blur_axis(x, 1), 2)

    def _adjoint(self, u):
        return self._blur_axis_adjoint(self._blur_axis_adjoint(u, 2), 1)

    def truncated(self, frames):
        return GaussianBlur((frames,) + self.input_shape[1:], self.kernel_size, self.sigma)

    def params(self):
        return {'kernel_size': self.kernel_size, 'sigma': self.sigma}


def make_mask(shape: tuple, keep_fraction: float, seed: int, per_frame: bool = True) -> np.ndarray:
    """Bernoulli(keep_fraction) 0/1 mask of shape (T, H, W, 1)."""
    if not 0.0 < keep_fraction < 1.0:
        raise ParameterError(f'keep_fraction must lie in (0, 1), got {keep_fraction}')
    T, H, W = shape[:3]
    stream = NoiseStream('mask', seed)
    draws = stream.uniform((T if per_frame else 1, H, W, 1))
    mask = (draws < keep_fraction).astype(np.float64)
    return mask if per_frame else np.repeat(mask, T, axis=0)


class RandomInpainting(Degradation):
    kind = 'inpaint'

    def __init__(self, shape: tuple, mask: np.ndarray):
        mask = np.asarray(mask, dtype=np.float64)
        if mask.ndim == 3:
            mask = mask[..., None]
        T, H, W, _ = shape
        if mask.shape[:3] != (T, H, W) or mask.shape[3] not in (1, shape[3]):
            raise ShapeError(f'mask shape {mask.shape} does not fit video shape {shape}')
        if not np.all((mask == 0) | (mask == 1)):
            raise ParameterError('mask entries must be 0 or 1')
        self.mask = mask
        super().__init__(shape, shape)

    def _forward(self, x):
        return x * self.mask

    def _adjoint(self, u):
        return u * self.mask

    def kept(self, frame: int) -> np.ndarray:
        """Boolean (H, W) map of observed pixels in one frame."""
        return self.mask[frame, ..., 0] > 0

    def truncated(self, frames):
        return RandomInpainting((frames,) + self.input_shape[1:], self.mask[:frames])

    def params(self):
        return {'kept_fraction': float(self.mask.mean())}
