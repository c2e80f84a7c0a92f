import numpy as np
from scipy.ndimage import correlate1d

from avis.core import Video
from avis.misc import AvisConfig
from avis.misc.errors import ShapeError
from avis.operators import gaussian_kernel_1d


def _pair(x, ref) -> tuple[np.ndarray, np.ndarray]:
    a = x.data if isinstance(x, Video) else np.asarray(x, dtype=np.float64)
    b = ref.data if isinstance(ref, Video) else np.asarray(ref, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f'cannot compare shapes {a.shape} and {b.shape}')
    return a, b


def psnr(x, ref) -> float:
    """Peak signal-to-noise ratio in dB for signals in [0, 1], capped."""
    a, b = _pair(x, ref)
    mse = float(np.mean((a - b) ** 2))
    if mse < AvisConfig.PSNR_MSE_FLOOR:
        return AvisConfig.PSNR_CAP
    return min(AvisConfig.PSNR_CAP, 10.0 * np.log10(1.0 / mse))


def _window_mean(frame: np.ndarray, taps: np.ndarray) -> np.ndarray:
    r = len(taps) // 2
    out = correlate1d(correlate1d(frame, taps, axis=0, mode='constant'), taps, axis=1, mode='constant')
    return out[r:frame.shape[0] - r, r:frame.shape[1] - r]


def ssim_frame(a: np.ndarray, b: np.ndarray, taps: np.ndarray) -> float:
    c1 = (AvisConfig.SSIM_K1 * 1.0) ** 2
    c2 = (AvisConfig.SSIM_K2 * 1.0) ** 2
    mu_a, mu_b = _window_mean(a, taps), _window_mean(b, taps)
    var_a = _window_mean(a * a, taps) - mu_a * mu_a
    var_b = _window_mean(b * b, taps) - mu_b * mu_b
    cov = _window_mean(a * b, taps) - mu_a * mu_b
    index = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2))
    return float(index.mean())


def ssim(x, ref) -> float:
    """Mean SSIM over frames; Gaussian 11x11 window (sigma 1.5), valid region only.

    Multi-channel inputs are reduced to gray by the channel mean.
    """
    a, b = _pair(x, ref)
    size = AvisConfig.SSIM_WINDOW
    if a.shape[1] < size or a.shape[2] < size:
        raise ShapeError(f'{a.shape[1]}x{a.shape[2]} frames are smaller than the {size}x{size} SSIM window')
    a, b = a.mean(axis=3), b.mean(axis=3)
    taps = gaussian_kernel_1d(size, AvisConfig.SSIM_SIGMA)
    return float(np.mean([ssim_frame(fa, fb, taps) for fa, fb in zip(a, b)]))
