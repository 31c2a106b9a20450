"""Exception hierarchy for qprivacy.

Every input defect raises a subclass of :class:`ValidationError`; where a
violation has a size (asymmetry, negative eigenvalue, trace defect, ...)
it is kept on ``magnitude`` so callers can report it.
"""

from __future__ import annotations


class QPrivacyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QPrivacyError, ValueError):
    def __init__(self, message: str, magnitude: float | None = None):
        super().__init__(message)
        self.magnitude = magnitude


class NotSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NegativeEigenvalue(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class DimMismatch(ValidationError):
    pass


class BadIndex(ValidationError):
    pass


class BadRank(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class BadEnsemble(ValidationError):
    pass


class EmptyKraus(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class NotTracePreserving(ValidationError):
    pass


class BadParam(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


class BadF(ValidationError):
    pass


class BadDim(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class FactorMismatch(ValidationError):
    pass


class BadWindow(ValidationError):
    pass


class UnknownCheck(ValidationError):
    pass


class ConditionViolated(QPrivacyError):
    """A precondition of the finite-n convergence experiment does not hold.

    ``condition`` names the failed check, e.g. ``"condition_ii_B"``.
    """

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition
