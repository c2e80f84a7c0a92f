from avis.operators.main import (
    Degradation, IdentityDegradation, Restricted, apply, adjoint, apply_gram_plus_identity, measure
)
from avis.operators.spatial import (
    SuperResolution, GaussianBlur, RandomInpainting, make_mask, gaussian_kernel_1d, box_mean, box_mean_adjoint
)
from avis.operators.temporal import TemporalAverage, SpatioTemporalAverage, causal_average_matrix
from avis.operators.factory import build_operator, TASKS
