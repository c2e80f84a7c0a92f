from avis.database.methods.create import create_run, add_metrics_row, add_bound_results
from avis.database.methods.read import (
    get_run, select_runs, select_run_metrics, select_bound_results, count_failed_bounds
)
from avis.database.methods.update import finish_run
