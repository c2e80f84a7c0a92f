from avis.bound.checker import (
    BoundCoefficients, BoundReport, bound_coefficients, lipschitz_exact, lipschitz_empirical, context_mismatch,
    coupled_run, verify_bound, sweep_bound, t0_sensitivity, write_bound_csv
)
