from avis.solvers.cg import CgConfig, CgResult, cg_solve
from avis.solvers.prerestore import (
    solve_prerestore, solve_proximal, proximal_objective, lift_measurement, nearest_infill, bilinear_lift
)
