from avis.analysis import MetricsRow
from avis.bound import BoundReport
from avis.database import Database
from avis.database.models import RunRecord, MetricsRecord, BoundRecord


def create_run(verb: str, folder: str, manifest_path: str) -> int:
    session = Database().session
    run = RunRecord(verb=verb, folder=folder, manifest_path=manifest_path)
    session.add(run)
    session.commit()
    return run.id


def add_metrics_row(run_id: int, row: MetricsRow) -> None:
    session = Database().session
    session.add(
        MetricsRecord(run_id=run_id, video_id=row.video_id, task=row.task, mode=row.mode, psnr_db=row.psnr_db,
                      ssim=row.ssim, latency_steps=row.latency_steps, guidance_calls=row.guidance_calls,
                      guidance_encodes=row.guidance_encodes, guidance_decodes=row.guidance_decodes,
                      reverse_steps=row.reverse_steps, wall_ms=row.wall_ms))
    session.commit()


def add_bound_results(run_id: int, reports: list[BoundReport]) -> None:
    session = Database().session
    for r in reports:
        session.add(
            BoundRecord(run_id=run_id, seed=r.seed, chunk=r.chunk, eps0=r.eps0, delta=r.delta,
                        eps_final=r.eps_final, Lambda_K=r.coefficients.Lambda, B_K=r.coefficients.B,
                        slack=r.slack, satisfied=r.satisfied))
    session.commit()
