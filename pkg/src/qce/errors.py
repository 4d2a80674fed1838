"""Exception types raised by the qce package."""


class QceError(Exception):
    """Base class for all qce-specific errors."""


class SqueezingDegenerateError(QceError):
    """Raised by the squeezed-state coefficient evaluators at r = 0.

    The squeezed-coherent formulas divide by sqrt(sinh 2r); the r = 0 state
    itself is fine (a plain coherent state) and callers must dispatch to the
    coherent-state coefficients instead.
    """


class DegenerateStateError(QceError):
    """The superposition normalization bracket vanished (null state)."""


class TruncationError(QceError):
    """The Fock-space cap was reached before the tail tolerance was met."""


class NumericalFaultError(QceError):
    """A quantity violated a bound that holds analytically.

    Signals a genuine numerical fault (broken unitarity, non-physical
    density matrix, eigen/SVD failure) rather than a user error.
    """


class StepSizeError(QceError):
    """The requested integrator step is too coarse for the spectrum."""


class DegenerateAbscissaError(QceError):
    """Least-squares fit requested with all abscissae equal."""


class ConfigError(QceError):
    """Invalid CLI flags or configuration file contents."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line
