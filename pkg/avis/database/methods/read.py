from sqlalchemy import exc

from avis.database import Database
from avis.database.models import RunRecord, MetricsRecord, BoundRecord


def get_run(run_id: int) -> RunRecord | None:
    try:
        return Database().session.query(RunRecord).filter(RunRecord.id == run_id).one()
    except exc.NoResultFound:
        return None


def select_runs(verb: str | None = None) -> list[RunRecord]:
    query = Database().session.query(RunRecord)
    if verb is not None:
        query = query.filter(RunRecord.verb == verb)
    return query.order_by(RunRecord.id).all()


def select_run_metrics(run_id: int) -> list[MetricsRecord]:
    return Database().session.query(MetricsRecord).filter(MetricsRecord.run_id == run_id).all()


def select_bound_results(run_id: int) -> list[BoundRecord]:
    return Database().session.query(BoundRecord).filter(BoundRecord.run_id == run_id).order_by(
        BoundRecord.seed).all()


def count_failed_bounds(run_id: int) -> int:
    return Database().session.query(BoundRecord).filter(BoundRecord.run_id == run_id,
                                                        BoundRecord.satisfied.is_(False)).count()
