from pathlib import Path

import numpy as np

from avis.core import NoiseStream, gaussian_draw
from avis.misc import AvisConfig
from avis.misc.errors import CheckpointFormatError, ParameterError, ShapeError
from avis.prior.base import VectorFieldPrior, check_timestep

MAGIC = b'LPRIOR1\n'


class LearnedPrior(VectorFieldPrior):
    """Per-location two-layer tanh network shared across the frame.

    At every spatial location the input is the chunk's L*C values of z_t,
    then t, then the same location of the mean of the cached chunks; the
    output is the L*C field values there. Parameters are one flat vector
    laid out as W1 (H x 2D+1), b1 (H), W2 (D x H), b2 (D) with D = L*C.
    """

    def __init__(self, chunk_len: int, channels: int = 1, hidden: int = AvisConfig.HIDDEN,
                 params: np.ndarray | None = None, seed: int = 0):
        if min(chunk_len, channels, hidden) < 1:
            raise ParameterError('chunk_len, channels and hidden must be >= 1')
        self.chunk_len, self.channels, self.hidden = chunk_len, channels, hidden
        if params is None:
            params = self.initial_params(seed)
        params = np.array(params, dtype=np.float64).ravel()
        if params.size != self.num_params:
            raise ShapeError(f'expected {self.num_params} parameters, got {params.size}')
        self.params = params
        self.params.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.chunk_len * self.channels

    @property
    def num_params(self) -> int:
        D, H = self.dim, self.hidden
        return H * (2 * D + 1) + H + D * H + D

    def initial_params(self, seed: int) -> np.ndarray:
        D, H = self.dim, self.hidden
        stream = NoiseStream('lprior:init', seed)
        w1 = gaussian_draw(stream, (H, 2 * D + 1)) / np.sqrt(2 * D + 1)
        w2 = 0.1 * gaussian_draw(stream, (D, H)) / np.sqrt(H)
        return np.concatenate([w1.ravel(), np.zeros(H), w2.ravel(), np.zeros(D)])

    def unpack(self, params: np.ndarray | None = None):
        p = self.params if params is None else params
        D, H = self.dim, self.hidden
        i = H * (2 * D + 1)
        w1, b1 = p[:i].reshape(H, 2 * D + 1), p[i:i + H]
        j = i + H + D * H
        return w1, b1, p[i + H:j].reshape(D, H), p[j:j + D]

    def with_params(self, params: np.ndarray) -> 'LearnedPrior':
        return LearnedPrior(self.chunk_len, self.channels, self.hidden, params=np.array(params))

    def _locations(self, z: np.ndarray) -> np.ndarray:
        """(B, L, h, w, C) -> (B*h*w, L*C)."""
        if z.shape[1] != self.chunk_len or z.shape[-1] != self.channels:
            raise ShapeError(f'chunk shape {z.shape[1:]} does not match chunk_len={self.chunk_len}, '
                             f'channels={self.channels}')
        B, L, h, w, C = z.shape
        return z.transpose(0, 2, 3, 1, 4).reshape(B * h * w, L * C)

    def _from_locations(self, out: np.ndarray, shape: tuple) -> np.ndarray:
        B, L, h, w, C = shape
        return out.reshape(B, h, w, L, C).transpose(0, 3, 1, 2, 4)

    def inputs(self, z_t: np.ndarray, t: np.ndarray, summaries: np.ndarray) -> np.ndarray:
        B, _, h, w, _ = z_t.shape
        t_col = np.repeat(np.asarray(t, dtype=np.float64), h * w)[:, None]
        return np.concatenate([self._locations(z_t), t_col, self._locations(summaries)], axis=1)

    def forward(self, U: np.ndarray, params: np.ndarray | None = None):
        w1, b1, w2, b2 = self.unpack(params)
        hidden = np.tanh(U @ w1.T + b1)
        return hidden @ w2.T + b2, hidden

    def summaries(self, contexts: list, chunk_shape: tuple) -> np.ndarray:
        return np.stack([c.mean(chunk_shape) for c in contexts])

    def _field(self, z_t, t, ctx):
        return self.vector_field_batch(z_t[None], np.array([t]), [ctx])[0]

    def vector_field_batch(self, z_t, t, contexts):
        z_t = np.asarray(z_t, dtype=np.float64)
        t = np.array([check_timestep(s) for s in t])
        out, _ = self.forward(self.inputs(z_t, t, self.summaries(contexts, z_t.shape[1:])))
        return self._from_locations(out, z_t.shape)

    def loss_and_grad(self, batch, params: np.ndarray | None = None) -> tuple[float, np.ndarray]:
        """CFM loss (mean over the batch of ||v - (z_1 - z_0)||^2) and its gradient in the flat layout."""
        B = batch.z0.shape[0]
        U = self.inputs(batch.z_t, batch.t, self.summaries(batch.contexts, batch.z0.shape[1:]))
        out, hidden = self.forward(U, params)
        residual = out - self._locations(batch.target)
        loss = float(np.sum(residual ** 2)) / B

        _, _, w2, _ = self.unpack(params)
        g_out = 2.0 * residual / B
        g_w2 = g_out.T @ hidden
        g_b2 = g_out.sum(axis=0)
        g_pre = (g_out @ w2) * (1.0 - hidden ** 2)
        g_w1 = g_pre.T @ U
        g_b1 = g_pre.sum(axis=0)
        return loss, np.concatenate([g_w1.ravel(), g_b1, g_w2.ravel(), g_b2])

    def save(self, path: str | Path) -> None:
        header = f'{self.chunk_len} {self.channels} {self.hidden} f32 LE\n'.encode('ascii')
        with open(path, 'wb') as f:
            f.write(MAGIC + header)
            f.write(self.params.astype('<f4').tobytes())

    @classmethod
    def load(cls, path: str | Path) -> 'LearnedPrior':
        with open(path, 'rb') as f:
            if f.read(len(MAGIC)) != MAGIC:
                raise CheckpointFormatError(f'{path}: not a learned-prior parameter file')
            fields = f.readline().decode('ascii', errors='replace').split()
            if len(fields) != 5 or fields[3:] != ['f32', 'LE']:
                raise CheckpointFormatError(f'{path}: malformed header {fields}')
            try:
                chunk_len, channels, hidden = (int(v) for v in fields[:3])
            except ValueError as exc:
                raise CheckpointFormatError(f'{path}: non-integer size in header {fields}') from exc
            shell = cls(chunk_len, channels, hidden)
            payload = np.frombuffer(f.read(), dtype='<f4')
        if payload.size != shell.num_params:
            raise CheckpointFormatError(f'{path}: {payload.size} parameters stored, {shell.num_params} expected')
        return shell.with_params(payload.astype(np.float64))

    def __repr__(self):
        return f'<LearnedPrior L={self.chunk_len} C={self.channels} hidden={self.hidden}>'
