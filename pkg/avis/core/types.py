from dataclasses import dataclass, field, replace

import numpy as np

from avis.misc.errors import ParameterError, ShapeError

VIDEO_CHANNELS = (1, 3)


def _as_samples(data) -> np.ndarray:
    array = np.asarray(data, dtype=np.float64)
    if array.ndim != 4:
        raise ShapeError(f'expected a 4-d (frames, height, width, channels) array, got shape {array.shape}')
    if not np.all(np.isfinite(array)):
        raise ParameterError('samples must be finite')
    return array


@dataclass(frozen=True)
class Video:
    """Pixel-space clip, frame-major then row-major then channel-last."""
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'data', _as_samples(self.data))
        if self.channels not in VIDEO_CHANNELS:
            raise ShapeError(f'video needs 1 or 3 channels, got {self.channels}')

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def channels(self) -> int:
        return self.data.shape[3]

    @property
    def shape(self) -> tuple:
        return self.data.shape


@dataclass(frozen=True)
class LatentSeq:
    data: np.ndarray
    chunk_len: int

    def __post_init__(self):
        object.__setattr__(self, 'data', _as_samples(self.data))
        if self.chunk_len < 1:
            raise ParameterError(f'chunk_len must be >= 1, got {self.chunk_len}')
        if self.latent_frames % self.chunk_len:
            raise ShapeError(f'{self.latent_frames} latent frames do not split into chunks of {self.chunk_len}')

    @property
    def latent_frames(self) -> int:
        return self.data.shape[0]

    @property
    def chunk_shape(self) -> tuple:
        return (self.chunk_len,) + self.data.shape[1:]

    @property
    def num_chunks(self) -> int:
        return self.latent_frames // self.chunk_len


@dataclass(frozen=True)
class Chunk:
    index: int
    data: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if self.index < 1:
            raise ParameterError(f'chunk index is 1-based, got {self.index}')
        if not 0.0 <= self.t <= 1.0:
            raise ParameterError(f'timestep must lie in [0, 1], got {self.t}')
        object.__setattr__(self, 'data', np.asarray(self.data, dtype=np.float64))

    def at(self, data: np.ndarray, t: float) -> 'Chunk':
        return replace(self, data=data, t=t)


@dataclass(frozen=True)
class Schedule:
    t0: float
    steps: int
    grid: tuple = field(default=())

    def __post_init__(self):
        grid = self.grid
        if len(grid) != self.steps + 1:
            raise ParameterError(f'grid needs {self.steps + 1} points, got {len(grid)}')
        if grid[-1] != 0.0:
            raise ParameterError('grid must end at 0')
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ParameterError('grid must be strictly decreasing')

    def pairs(self):
        """(k, t_k, t_{k+1}) for every reverse step."""
        return [(k, self.grid[k], self.grid[k + 1]) for k in range(self.steps)]


@dataclass(frozen=True)
class Measurement:
    payload: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'payload', np.asarray(self.payload, dtype=np.float64))
        if self.noise_sigma < 0:
            raise ParameterError(f'noise_sigma must be >= 0, got {self.noise_sigma}')

    @property
    def shape(self) -> tuple:
        return self.payload.shape


def make_schedule(t0: float, steps: int) -> Schedule:
    if not 0.0 < t0 <= 1.0:
        raise ParameterError(f't0 must lie in (0, 1], got {t0}')
    if steps < 1:
        raise ParameterError(f'step count must be >= 1, got {steps}')
    grid = tuple((1.0 - k / steps) * t0 for k in range(steps + 1))
    return Schedule(t0=t0, steps=steps, grid=grid)


def split_chunks(z: LatentSeq) -> list[Chunk]:
    L = z.chunk_len
    return [Chunk(index=n + 1, data=z.data[n * L:(n + 1) * L].copy()) for n in range(z.num_chunks)]


def merge_chunks(chunks: list[Chunk], chunk_len: int) -> LatentSeq:
    if not chunks:
        raise ShapeError('nothing to merge')
    ordered = sorted(chunks, key=lambda c: c.index)
    if [c.index for c in ordered] != list(range(1, len(ordered) + 1)):
        raise ShapeError('chunk indices must be 1..N without gaps')
    return LatentSeq(np.concatenate([c.data for c in ordered], axis=0), chunk_len)
