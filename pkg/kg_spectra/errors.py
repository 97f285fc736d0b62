"""Exception hierarchy for spectral computations.

Parameter and domain problems derive from :class:`ValueError`; numerical
failures derive from :class:`ArithmeticError` or :class:`RuntimeError`, so
callers that only care about the broad category can keep catching the
builtin types.
"""

from __future__ import annotations


class KGSpectraError(Exception):
    """Base class for every error raised by :mod:`kg_spectra`."""


class DomainError(KGSpectraError, ValueError):
    """An argument lies outside the domain of the operation (e.g. r <= 0)."""


class MissingContextError(KGSpectraError, ValueError):
    """An energy-dependent potential was evaluated without an energy."""


class UnsupportedKindError(KGSpectraError, ValueError):
    """The potential kind is not supported by the requested operation."""


class UnsupportedDimensionError(KGSpectraError, ValueError):
    """The requested space dimension is not computed by this toolkit."""


class UnsupportedInteractionError(KGSpectraError, ValueError):
    """The Klein-Gordon interaction has no known absence region."""


class MismatchedGridError(KGSpectraError, ValueError):
    """Two grids that must share a spacing do not."""


class InsufficientDomainError(KGSpectraError, ValueError):
    """A radial grid does not extend far enough beyond R0."""


class QuadratureError(KGSpectraError, ArithmeticError):
    """Adaptive quadrature did not meet its tolerance within the budget."""


class ConvergenceError(KGSpectraError, RuntimeError):
    """An iterative eigen-solver or fixed-point loop did not converge."""


class NoEigenvalueError(KGSpectraError, RuntimeError):
    """The effective operator has no discrete eigenvalue below threshold."""


class AuditStageError(KGSpectraError, RuntimeError):
    """A failure inside one stage of a theorem audit.

    Attributes:
        stage: Name of the audit stage that failed.
    """

    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
