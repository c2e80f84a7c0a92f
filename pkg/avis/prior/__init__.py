from avis.prior.context import ContextCache
from avis.prior.base import VectorFieldPrior, vector_field, denoised_estimate, update_context, check_timestep
from avis.prior.gauss_ar import GaussARPrior, posterior_coefficient
from avis.prior.learned import LearnedPrior
from avis.prior.loss import (
    CfmBatch, build_training_pairs, draw_cfm_batch, cfm_objective, cfm_loss, denoising_error, train
)
