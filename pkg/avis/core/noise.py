import copy
import hashlib

import numpy as np


def _label_key(label: str) -> tuple:
    digest = hashlib.blake2b(label.encode('utf-8'), digest_size=16).digest()
    return tuple(int.from_bytes(digest[i:i + 4], 'little') for i in range(0, 16, 4))


class NoiseStream:
    """Labeled Gaussian stream; (label, seed) fixes the whole draw sequence."""

    def __init__(self, label: str, seed: int):
        self.label = label
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=_label_key(label))
        self._rng = np.random.Generator(np.random.PCG64(sequence))

    def normal(self, shape) -> np.ndarray:
        return self._rng.standard_normal(shape)

    def uniform(self, shape) -> np.ndarray:
        return self._rng.random(shape)

    def permutation(self, n: int) -> np.ndarray:
        return self._rng.permutation(n)

    def clone(self) -> 'NoiseStream':
        forked = copy.copy(self)
        forked._rng = copy.deepcopy(self._rng)
        return forked

    def __repr__(self):
        return f'NoiseStream({self.label!r}, seed={self.seed})'


def gaussian_draw(stream: NoiseStream, shape) -> np.ndarray:
    return stream.normal(shape)


def init_stream(seed: int, chunk: int) -> NoiseStream:
    return NoiseStream(f'init:{chunk}', seed)


def renoise_stream(seed: int, chunk: int, step: int) -> NoiseStream:
    return NoiseStream(f'renoise:{chunk}:{step}', seed)
