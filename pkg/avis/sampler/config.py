from dataclasses import dataclass

from avis.core import Schedule, make_schedule
from avis.misc import AvisConfig
from avis.misc.errors import ParameterError

MODES = ('avis', 'flash', 'flash_periodic', 'joint')


@dataclass(frozen=True)
class RunConfig:
    mode: str = 'avis'
    t0: float = AvisConfig.T0
    steps: int = AvisConfig.STEPS
    gamma: float = AvisConfig.GAMMA
    guidance_iters: int = AvisConfig.GUIDANCE_CG_ITERS
    guidance_period: int = AvisConfig.GUIDANCE_PERIOD
    chunk_len: int = AvisConfig.CHUNK_LEN
    seed: int = 0
    prerestore_iters: int | None = None
    use_context: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f'unknown mode {self.mode!r}, expected one of {MODES}')
        if self.guidance_period < 1:
            raise ParameterError(f'guidance period must be >= 1, got {self.guidance_period}')
        if self.gamma < 0:
            raise ParameterError(f'gamma must be >= 0, got {self.gamma}')
        if self.guidance_iters < 1:
            raise ParameterError(f'guidance CG iterations must be >= 1, got {self.guidance_iters}')
        if self.chunk_len < 1:
            raise ParameterError(f'chunk length must be >= 1, got {self.chunk_len}')
        make_schedule(self.t0, self.steps)

    @property
    def schedule(self) -> Schedule:
        return make_schedule(self.t0, self.steps)

    def guided(self, n: int) -> bool:
        if self.mode in ('avis', 'joint'):
            return True
        if self.mode == 'flash':
            return n == 1
        return (n - 1) % self.guidance_period == 0
