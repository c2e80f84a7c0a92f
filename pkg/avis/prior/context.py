from dataclasses import dataclass

import numpy as np

from avis.misc.errors import ContextOrderError


@dataclass(frozen=True)
class ContextCache:
    """Append-only record of finalized chunks, oldest first.

    `count` is the number of chunks seen so far; `entries` holds what the
    prior keeps of them (at most `capacity` newest, all when None).
    """
    entries: tuple = ()
    count: int = 0
    capacity: int | None = None

    def __len__(self):
        return len(self.entries)

    @property
    def empty(self) -> bool:
        return not self.entries

    def append(self, index: int, entry: np.ndarray) -> 'ContextCache':
        if index != self.count + 1:
            raise ContextOrderError(f'context holds {self.count} chunks, cannot append chunk {index}')
        entries = self.entries + (np.array(entry, dtype=np.float64),)
        if self.capacity is not None:
            entries = entries[-self.capacity:]
        return ContextCache(entries=entries, count=index, capacity=self.capacity)

    def latest(self) -> np.ndarray:
        if not self.entries:
            raise ContextOrderError('context is empty')
        return self.entries[-1]

    def mean(self, like_shape: tuple) -> np.ndarray:
        if not self.entries:
            return np.zeros(like_shape)
        return np.mean(np.stack(self.entries), axis=0)

    def flat(self) -> np.ndarray:
        """Concatenation of the stored chunks; the context norm is taken over this."""
        if not self.entries:
            return np.zeros(0)
        return np.concatenate([e.ravel() for e in self.entries])
