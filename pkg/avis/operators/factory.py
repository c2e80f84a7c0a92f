from avis.misc import AvisConfig
from avis.misc.errors import ParameterError
from avis.operators.main import Degradation, IdentityDegradation
from avis.operators.spatial import SuperResolution, GaussianBlur, RandomInpainting, make_mask
from avis.operators.temporal import TemporalAverage, SpatioTemporalAverage

TASKS = ('sr4', 'inpaint', 'gblur', 'tavg', 'stavg', 'identity')


def build_operator(task: str, shape: tuple, *, factor: int | None = None, kernel_size: int | None = None,
                   sigma: float | None = None, window: int | None = None,
                   keep: float = AvisConfig.KEEP_FRACTION, mask_seed: int = 0, per_frame_mask: bool = True,
                   mask=None, full_scale: bool = False) -> Degradation:
    if task == 'sr4':
        return SuperResolution(shape, factor or AvisConfig.SR_FACTOR)
    if task == 'inpaint':
        if mask is None:
            mask = make_mask(shape, keep, mask_seed, per_frame=per_frame_mask)
        return RandomInpainting(shape, mask)
    if task == 'gblur':
        default_size = AvisConfig.FULL_BLUR_KERNEL if full_scale else AvisConfig.BLUR_KERNEL
        default_sigma = AvisConfig.FULL_BLUR_SIGMA if full_scale else AvisConfig.BLUR_SIGMA
        return GaussianBlur(shape, kernel_size or default_size, sigma or default_sigma)
    if task == 'tavg':
        return TemporalAverage(shape, window or AvisConfig.TAVG_WINDOW)
    if task == 'stavg':
        return SpatioTemporalAverage(shape, factor or AvisConfig.STAVG_FACTOR, window or AvisConfig.STAVG_WINDOW)
    if task == 'identity':
        return IdentityDegradation(shape)
    raise ParameterError(f'unknown task {task!r}, expected one of {TASKS}')
