import threading
from collections import defaultdict

import numpy as np
from scipy.ndimage import zoom

from avis.core import Video, LatentSeq
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError, ShapeError
from avis.operators import box_mean

KINDS = ('identity', 'pool_interp')
BUCKETS = ('guidance', 'display', 'prerestore', 'other')


class PassCounter:
    """Thread-safe encode/decode tallies split into labeled buckets."""

    def __init__(self):
        self._lock = threading.Lock()
        self._counts = defaultdict(lambda: [0, 0])

    def bump(self, bucket: str, direction: int) -> None:
        if bucket not in BUCKETS:
            raise ParameterError(f'unknown counter bucket {bucket!r}')
        with self._lock:
            self._counts[bucket][direction] += 1

    def read(self, bucket: str | None = None) -> tuple[int, int]:
        with self._lock:
            if bucket is not None:
                enc, dec = self._counts.get(bucket, (0, 0))
                return enc, dec
            return (sum(c[0] for c in self._counts.values()),
                    sum(c[1] for c in self._counts.values()))

    def snapshot(self) -> dict:
        with self._lock:
            return {b: tuple(self._counts.get(b, (0, 0))) for b in BUCKETS}

    def reset(self) -> None:
        with self._lock:
            self._counts.clear()


class Codec:
    """Linear stand-in for a video autoencoder.

    identity relabels pixel frames as latent frames. pool_interp box-pools
    f_s x f_s pixels and f_t frames per latent sample; a leading chunk keeps
    its first frame whole, so T_z = 1 + (T_px - 1) / f_t for a whole clip.
    Decoding is bilinear in space and nearest (frame duplication) in time.
    """

    def __init__(self, kind: str = 'identity', spatial: int = AvisConfig.CODEC_SPATIAL,
                 temporal: int = AvisConfig.CODEC_TEMPORAL):
        if kind not in KINDS:
            raise ParameterError(f'unknown codec kind {kind!r}, expected one of {KINDS}')
        if spatial < 1 or temporal < 1:
            raise ParameterError(f'codec factors must be >= 1, got {spatial}, {temporal}')
        self.kind = kind
        self.spatial = spatial if kind == 'pool_interp' else 1
        self.temporal = temporal if kind == 'pool_interp' else 1
        self.counter = PassCounter()

    def latent_frames(self, pixel_frames: int, leading: bool = True) -> int:
        f = self.temporal
        if f == 1:
            return pixel_frames
        if leading:
            if pixel_frames < 1 or (pixel_frames - 1) % f:
                raise ShapeError(f'{pixel_frames} frames: (T - 1) must be divisible by {f}')
            return 1 + (pixel_frames - 1) // f
        if pixel_frames % f:
            raise ShapeError(f'{pixel_frames} frames are not divisible by {f}')
        return pixel_frames // f

    def pixel_frames(self, latent_frames: int, leading: bool = True) -> int:
        f = self.temporal
        if f == 1:
            return latent_frames
        return 1 + (latent_frames - 1) * f if leading else latent_frames * f

    def latent_shape(self, pixel_shape: tuple, leading: bool = True) -> tuple:
        T, H, W, C = pixel_shape
        if H % self.spatial or W % self.spatial:
            raise ShapeError(f'{H}x{W} frame is not divisible by codec factor {self.spatial}')
        return (self.latent_frames(T, leading), H // self.spatial, W // self.spatial, C)

    def pixel_span(self, n: int, chunk_len: int) -> tuple[int, int]:
        """Pixel frames [start, stop) covered by latent chunk n (1-based)."""
        if n < 1:
            raise ParameterError(f'chunk index is 1-based, got {n}')
        f = self.temporal
        if f == 1:
            return (n - 1) * chunk_len, n * chunk_len
        start = 0 if n == 1 else 1 + ((n - 1) * chunk_len - 1) * f
        return start, 1 + (n * chunk_len - 1) * f

    def encode_array(self, x: np.ndarray, leading: bool = True, bucket: str = 'other') -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        self.latent_frames(x.shape[0], leading)
        self.counter.bump(bucket, 0)
        if self.kind == 'identity':
            return x.copy()
        pooled = box_mean(x, self.spatial)
        f = self.temporal
        head, body = (pooled[:1], pooled[1:]) if leading else (pooled[:0], pooled)
        T, h, w, C = body.shape
        body = body.reshape(T // f, f, h, w, C).mean(axis=1)
        return np.concatenate([head, body], axis=0)

    def decode_array(self, z: np.ndarray, leading: bool = True, bucket: str = 'other',
                     pixel_shape: tuple | None = None) -> np.ndarray:
        """Decode a latent span; with `pixel_shape` the latent must be exactly what encoding that shape yields."""
        z = np.asarray(z, dtype=np.float64)
        if z.ndim != 4:
            raise ShapeError(f'latent must be 4-d, got shape {z.shape}')
        if pixel_shape is not None and z.shape != self.latent_shape(pixel_shape, leading):
            raise ShapeError(f'latent shape {z.shape} does not match {self} for pixels {tuple(pixel_shape)}')
        self.counter.bump(bucket, 1)
        if self.kind == 'identity':
            return z.copy()
        head, body = (z[:1], z[1:]) if leading else (z[:0], z)
        frames = np.concatenate([head, np.repeat(body, self.temporal, axis=0)], axis=0)
        s = self.spatial
        return zoom(frames, (1, s, s, 1), order=1, mode='nearest', grid_mode=True)

    def encode(self, x, chunk_len: int | None = None, leading: bool = True, bucket: str = 'other') -> LatentSeq:
        data = self.encode_array(x.data if isinstance(x, Video) else x, leading, bucket)
        return LatentSeq(data, chunk_len or data.shape[0])

    def decode(self, z, leading: bool = True, bucket: str = 'other', pixel_shape: tuple | None = None) -> Video:
        data = z.data if isinstance(z, LatentSeq) else z
        return Video(self.decode_array(data, leading, bucket, pixel_shape))

    def read_counters(self, bucket: str | None = None) -> tuple[int, int]:
        return self.counter.read(bucket)

    def reset_counters(self) -> None:
        self.counter.reset()

    def __repr__(self):
        return f'<Codec {self.kind} f_s={self.spatial} f_t={self.temporal}>'


def encode(codec: Codec, x, **kwargs) -> LatentSeq:
    return codec.encode(x, **kwargs)


def decode(codec: Codec, z, **kwargs) -> Video:
    return codec.decode(z, **kwargs)


def read_counters(codec: Codec) -> tuple[int, int]:
    return codec.read_counters()
