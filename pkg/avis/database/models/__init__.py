from avis.database.models.main import RunRecord, MetricsRecord, BoundRecord, RunStatus, register_models
