"""Exception hierarchy shared by the solver, scattering and harness modules."""


class BecScatError(Exception):
    """Base class for all errors raised by :mod:`becscat`."""


class InvalidConfigError(BecScatError, ValueError):
    """A grid, solver or sweep configuration violates its preconditions."""


class InvalidInputError(BecScatError, ValueError):
    """A numerical argument lies outside the domain of an operation."""


class DegenerateProfileError(BecScatError, ValueError):
    """A radial profile has zero norm and cannot be normalized."""


class UnsupportedRegimeError(BecScatError, ValueError):
    """Requested physics outside the supported regime (e.g. attractive gas)."""


class TruncatedSupportError(BecScatError, ValueError):
    """The radial box is too small to hold the Thomas-Fermi support."""


class OutOfRangeError(BecScatError, ValueError):
    """A lookup falls outside a tabulated range; no extrapolation is done."""


class InsufficientDataError(BecScatError, ValueError):
    """Not enough samples (points, minima) to carry out a fit or detection."""


class NonConvergenceError(BecScatError, RuntimeError):
    """Imaginary-time relaxation hit ``max_steps`` before converging.

    The best iterate is kept on :attr:`state` so callers can inspect or
    restart from it.
    """

    def __init__(self, message, state=None, residual=None, gamma=None):
        super().__init__(message)
        self.state = state
        self.residual = residual
        self.gamma = gamma


class DatasetFileError(BecScatError, OSError):
    """Writing or reading a dataset file failed."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path
