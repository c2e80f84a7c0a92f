import datetime

from avis.database import Database
from avis.database.models import RunRecord, RunStatus


def finish_run(run_id: int, exit_code: int) -> None:
    status = RunStatus.FINISHED if exit_code in (0, 3) else RunStatus.FAILED
    Database().session.query(RunRecord).filter(RunRecord.id == run_id).update(
        values={RunRecord.status: status,
                RunRecord.exit_code: exit_code,
                RunRecord.finished_at: datetime.datetime.now()})
    Database().session.commit()
