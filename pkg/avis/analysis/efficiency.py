import csv
from dataclasses import dataclass, fields, asdict
from pathlib import Path

from avis.analysis.metrics import psnr, ssim
from avis.misc.errors import IncompleteTraceError
from avis.sampler.trace import RunTrace


@dataclass(frozen=True)
class MetricsRow:
    video_id: str
    task: str
    mode: str
    psnr_db: float
    ssim: float
    latency_steps: int
    guidance_calls: int
    prerestore_encodes: int
    guidance_encodes: int
    guidance_decodes: int
    display_decodes: int
    reverse_steps: int
    frames_per_step: float
    first_display_ms: float
    wall_ms: float


COLUMNS = [f.name for f in fields(MetricsRow)]


def efficiency_report(traces) -> list[dict]:
    """Structural efficiency figures of each trace: latency in reverse steps, codec passes by bucket."""
    if isinstance(traces, RunTrace):
        traces = [traces]
    reports = []
    for trace in traces:
        if not trace.displayed:
            raise IncompleteTraceError('trace has no displayed chunks')
        totals = trace.bucket_totals()
        frames = sum(p.shape[0] for _, p in trace.displayed)
        reports.append({
            'latency_steps': trace.first_display_step(),
            'guidance_calls': len(trace.guidance_calls()),
            'prerestore_encodes': totals['prerestore'][0],
            'guidance_encodes': totals['guidance'][0],
            'guidance_decodes': totals['guidance'][1],
            'display_decodes': totals['display'][1],
            'reverse_steps': trace.reverse_steps,
            'frames_per_step': frames / trace.reverse_steps if trace.reverse_steps else float(frames),
            'first_display_ms': trace.first_display_ns() / 1e6,
            'wall_ms': trace.total_ns() / 1e6,
        })
    return reports


def metrics_row(video_id: str, task: str, mode: str, restored, reference, trace: RunTrace) -> MetricsRow:
    return MetricsRow(video_id=video_id, task=task, mode=mode, psnr_db=psnr(restored, reference),
                      ssim=ssim(restored, reference), **efficiency_report(trace)[0])


def write_metrics_csv(rows: list[MetricsRow], path: str | Path) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(asdict(row))
