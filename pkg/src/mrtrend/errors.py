"""Exception types raised by the numerical routines."""


class NumericalError(ArithmeticError):
    """A numerical or domain failure (CLI exit status 2)."""


class DegenerateRegressorError(NumericalError):
    """The reversion regressor (level - X) vanishes, so alpha is unidentified."""


class DomainError(NumericalError, ValueError):
    """An input outside the model domain, e.g. a non-positive level for gamma > 0."""


class SpectralLeakageError(NumericalError, ValueError):
    """A DFT bin does not map to an integer harmonic of the trend period."""
