from dataclasses import dataclass

import numpy as np

from avis.core import Video, LatentSeq, NoiseStream, gaussian_draw
from avis.misc.errors import ParameterError, ShapeError


@dataclass(frozen=True)
class SynthSpec:
    kind: str
    frames: int
    height: int
    width: int
    channels: int = 1
    seed: int = 0
    # blobs
    blobs: int = 3
    blob_speed: float = 1.0
    blob_radius: float = 4.0
    background: float = 0.2
    amplitude: float = 0.7
    # gauss_ar1
    rho: float = 0.9
    sigma_p: float = 1.0
    mu0: float = 0.0

    def __post_init__(self):
        if self.kind not in ('blobs', 'gauss_ar1'):
            raise ParameterError(f'unknown synth kind {self.kind!r}')
        if min(self.frames, self.height, self.width, self.channels) <= 0:
            raise ParameterError('synth dimensions must be positive')
        if self.kind == 'gauss_ar1':
            if abs(self.rho) >= 1:
                raise ParameterError(f'|rho| must be < 1, got {self.rho}')
            if self.sigma_p <= 0:
                raise ParameterError(f'sigma_p must be > 0, got {self.sigma_p}')

    @property
    def sigma_c(self) -> float:
        return float(np.sqrt(1.0 - self.rho ** 2) * self.sigma_p)


def synth_blobs(spec: SynthSpec) -> Video:
    if spec.kind != 'blobs':
        raise ParameterError(f'synth_blobs needs kind=blobs, got {spec.kind!r}')
    stream = NoiseStream('blobs', spec.seed)
    H, W, C = spec.height, spec.width, spec.channels
    limits = np.array([H - 1, W - 1], dtype=np.float64)
    pos = stream.uniform((spec.blobs, 2)) * limits
    angle = stream.uniform(spec.blobs) * 2.0 * np.pi
    vel = spec.blob_speed * np.stack([np.sin(angle), np.cos(angle)], axis=1)
    tint = spec.amplitude * (0.5 + 0.5 * stream.uniform((spec.blobs, C)))

    rows, cols = np.meshgrid(np.arange(H, dtype=np.float64), np.arange(W, dtype=np.float64), indexing='ij')
    frames = np.full((spec.frames, H, W, C), spec.background, dtype=np.float64)
    for t in range(spec.frames):
        for b in range(spec.blobs):
            d2 = (rows - pos[b, 0]) ** 2 + (cols - pos[b, 1]) ** 2
            frames[t] += np.exp(-d2 / (2.0 * spec.blob_radius ** 2))[..., None] * tint[b]
        pos += vel
        low, high = pos < 0, pos > limits
        pos = np.where(low, -pos, pos)
        pos = np.where(high, 2.0 * limits - pos, pos)
        vel = np.where(low | high, -vel, vel)
    # float32-representable so .vraw round trips stay exact
    return Video(np.clip(frames, 0.0, 1.0).astype(np.float32).astype(np.float64))


def synth_gauss_ar1(spec: SynthSpec, chunk_len: int) -> LatentSeq:
    """Chunks drawn from z^1 ~ N(mu0, sigma_p^2 I), z^n | z^{n-1} ~ N(rho z^{n-1}, sigma_c^2 I)."""
    if spec.kind != 'gauss_ar1':
        raise ParameterError(f'synth_gauss_ar1 needs kind=gauss_ar1, got {spec.kind!r}')
    if spec.frames % chunk_len:
        raise ShapeError(f'{spec.frames} latent frames do not split into chunks of {chunk_len}')
    stream = NoiseStream('gauss_ar1', spec.seed)
    shape = (chunk_len, spec.height, spec.width, spec.channels)
    chunks = [spec.mu0 + spec.sigma_p * gaussian_draw(stream, shape)]
    for _ in range(spec.frames // chunk_len - 1):
        chunks.append(spec.rho * chunks[-1] + spec.sigma_c * gaussian_draw(stream, shape))
    return LatentSeq(np.concatenate(chunks, axis=0), chunk_len)
