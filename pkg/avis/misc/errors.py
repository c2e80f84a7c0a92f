class AvisError(Exception):
    """Base class for every error raised by the solver stack."""


class ParameterError(AvisError, ValueError):
    pass


class ShapeError(AvisError, ValueError):
    pass


class VrawFormatError(AvisError, ValueError):
    pass


class VrawTruncatedError(VrawFormatError):
    pass


class CheckpointFormatError(AvisError, ValueError):
    pass


class DivergenceError(AvisError, ArithmeticError):
    pass


class TrainingError(DivergenceError):
    pass


class SingularTimestepError(ParameterError):
    pass


class ContextOrderError(AvisError, ValueError):
    pass


class UnsupportedPriorError(AvisError, TypeError):
    pass


class IncompleteTraceError(AvisError, ValueError):
    pass
