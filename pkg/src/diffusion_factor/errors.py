"""Exception hierarchy shared across the package."""


class DiffusionFactorError(Exception):
    """Base class for every error raised by this package."""


class NotAUnit(DiffusionFactorError, ValueError):
    pass


class OutOfRange(DiffusionFactorError, ValueError):
    pass


class BadFactorization(DiffusionFactorError, ValueError):
    pass


class ScreenRejected(DiffusionFactorError, ValueError):
    """N is even, prime, or a prime power, so the pipeline does not apply."""


class TooLarge(DiffusionFactorError, ValueError):
    pass


class PreconditionViolated(DiffusionFactorError, ValueError):
    pass


class UnknownVertex(DiffusionFactorError, KeyError):
    pass


class NonpositiveProbability(DiffusionFactorError, ValueError):
    pass


class EmptyMeasurements(DiffusionFactorError, ValueError):
    pass


class EngineError(DiffusionFactorError, RuntimeError):
    """Probability vector left the simplex by more than roundoff allows."""


class WitnessInvalid(DiffusionFactorError, RuntimeError):
    pass


class LiftFailure(DiffusionFactorError, RuntimeError):
    pass


class DecodeFailure(DiffusionFactorError, RuntimeError):
    pass


class OrderNotOdd(DiffusionFactorError, RuntimeError):
    pass
