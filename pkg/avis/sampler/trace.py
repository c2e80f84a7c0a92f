import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from avis.codec import Codec, BUCKETS
from avis.core import Video
from avis.misc.errors import IncompleteTraceError


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    chunk: int
    step: int
    reverse_steps: int
    deltas: dict
    wall_ns: int


@dataclass
class RunTrace:
    """Event log of one sampling run plus the pixel chunks in display order."""
    codec: Codec
    events: list = field(default_factory=list)
    displayed: list = field(default_factory=list)
    reverse_steps: int = 0

    def __post_init__(self):
        self._last = self.codec.counter.snapshot()
        self._started = time.perf_counter_ns()

    def record(self, kind: str, chunk: int, step: int = -1) -> TraceEvent:
        if kind in ('step', 'guidance'):
            self.reverse_steps += 1
        now = self.codec.counter.snapshot()
        deltas = {b: (now[b][0] - self._last[b][0], now[b][1] - self._last[b][1]) for b in BUCKETS}
        self._last = now
        event = TraceEvent(kind, chunk, step, self.reverse_steps, deltas, time.perf_counter_ns() - self._started)
        self.events.append(event)
        return event

    def display(self, chunk: int, pixels: np.ndarray) -> TraceEvent:
        if self.displayed and chunk != self.displayed[-1][0] + 1:
            raise IncompleteTraceError(f'chunk {chunk} displayed after chunk {self.displayed[-1][0]}')
        self.displayed.append((chunk, pixels))
        return self.record('display', chunk)

    def guidance_calls(self) -> list[tuple[int, int]]:
        return [(e.chunk, e.step) for e in self.events if e.kind == 'guidance']

    def display_steps(self) -> dict[int, int]:
        """Reverse steps completed (over all chunks) when each chunk was shown."""
        return {e.chunk: e.reverse_steps for e in self.events if e.kind == 'display'}

    def first_display_step(self) -> int:
        steps = self.display_steps()
        if not steps:
            raise IncompleteTraceError('nothing was displayed')
        return steps[min(steps)]

    def first_display_ns(self) -> int:
        for e in self.events:
            if e.kind == 'display':
                return e.wall_ns
        raise IncompleteTraceError('nothing was displayed')

    def total_ns(self) -> int:
        return self.events[-1].wall_ns if self.events else 0

    def bucket_totals(self) -> dict:
        totals = {b: [0, 0] for b in BUCKETS}
        for e in self.events:
            for b, (enc, dec) in e.deltas.items():
                totals[b][0] += enc
                totals[b][1] += dec
        return {b: tuple(v) for b, v in totals.items()}

    def video(self) -> Video:
        if not self.displayed:
            raise IncompleteTraceError('nothing was displayed')
        if [c for c, _ in self.displayed] != list(range(1, len(self.displayed) + 1)):
            raise IncompleteTraceError('displayed chunks have gaps')
        return Video(np.concatenate([p for _, p in self.displayed], axis=0))


def write_trace_csv(trace: RunTrace, path: str | Path) -> None:
    header = ['event', 'chunk', 'step', 'reverse_steps']
    header += [f'{b}_{d}' for b in BUCKETS for d in ('encodes', 'decodes')]
    header.append('wall_ns')
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for e in trace.events:
            row = [e.kind, e.chunk, e.step, e.reverse_steps]
            for b in BUCKETS:
                row.extend(e.deltas[b])
            row.append(e.wall_ns)
            writer.writerow(row)
