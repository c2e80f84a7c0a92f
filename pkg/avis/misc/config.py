from abc import ABC
from typing import Final


class AvisConfig(ABC):
    # sampling
    T0: Final = 0.1
    STEPS: Final = 2
    GAMMA: Final = 1.0
    GUIDANCE_CG_ITERS: Final = 5
    CHUNK_LEN: Final = 3
    GUIDANCE_PERIOD: Final = 7

    # pre-restoration CG budgets per task
    PRERESTORE_ITERS: Final = {
        'gblur': 5,
        'sr4': 5,
        'tavg': 50,
        'stavg': 100,
        'inpaint': 0,
        'identity': 1,
    }
    CG_TOL: Final = 1e-10
    CG_RECOMPUTE_EVERY: Final = 50

    # desk-scale operators
    SR_FACTOR: Final = 4
    BLUR_KERNEL: Final = 9
    BLUR_SIGMA: Final = 1.5
    TAVG_WINDOW: Final = 7
    STAVG_FACTOR: Final = 4
    STAVG_WINDOW: Final = 4
    KEEP_FRACTION: Final = 0.5

    # full-scale presets (480x854, 81 frames)
    FULL_BLUR_KERNEL: Final = 61
    FULL_BLUR_SIGMA: Final = 3.0

    # desk geometry, chosen so that T_z = 9 and N = 3
    FRAMES_IDENTITY: Final = 9
    HEIGHT: Final = 32
    WIDTH: Final = 32
    CHANNELS: Final = 1
    CODEC_SPATIAL: Final = 2
    CODEC_TEMPORAL: Final = 4

    # analytic prior
    RHO: Final = 0.9
    SIGMA_P: Final = 1.0
    MU0: Final = 0.0

    # learned prior
    HIDDEN: Final = 32
    LEARNING_RATE: Final = 1e-2
    BATCH_SIZE: Final = 16
    EPOCHS: Final = 20

    # metrics
    PSNR_CAP: Final = 99.0
    PSNR_MSE_FLOOR: Final = 1e-10
    SSIM_WINDOW: Final = 11
    SSIM_SIGMA: Final = 1.5
    SSIM_K1: Final = 0.01
    SSIM_K2: Final = 0.03

    # bound verification
    BOUND_SLACK: Final = 1e-9
    BOUND_SEEDS: Final = 100
    LIPSCHITZ_TRIALS: Final = 1000
