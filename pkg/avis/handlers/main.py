from avis.handlers.ablate import register_ablate_handlers
from avis.handlers.bench import register_bench_handlers
from avis.handlers.metrics import register_metrics_handlers
from avis.handlers.restore import register_restore_handlers
from avis.handlers.synth import register_synth_handlers
from avis.handlers.train_prior import register_train_prior_handlers
from avis.handlers.verify_bound import register_verify_bound_handlers


def register_all_handlers(subparsers) -> None:
    handlers = (
        register_synth_handlers,
        register_restore_handlers,
        register_train_prior_handlers,
        register_verify_bound_handlers,
        register_bench_handlers,
        register_metrics_handlers,
        register_ablate_handlers,
    )
    for handler in handlers:
        handler(subparsers)
