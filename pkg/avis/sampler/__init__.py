from avis.sampler.config import RunConfig, MODES
from avis.sampler.trace import RunTrace, TraceEvent, write_trace_csv
from avis.sampler.steps import (
    Guidance, init_estimate, initialize_chunk, chunk_guidance, guided_estimate, reverse_step
)
from avis.sampler.pipelines import run_avis, run_flash, run_joint_baseline, run_mode
