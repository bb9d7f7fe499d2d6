"""Exception types shared across the package."""


class QThetaError(Exception):
    """Base class for all errors raised by this package."""


class EmptyWindow(QThetaError):
    """An operation produced a series whose validity window is empty."""


class OutOfWindow(QThetaError):
    """A coefficient was requested outside a series' validity window."""


class NotInvertible(QThetaError):
    """The series is not a unit in the truncated Laurent ring."""


class PoleAtZero(QThetaError):
    """A negative power met a zero value."""


class NonTruncatable(QThetaError):
    """An infinite sum has no certified truncation order."""


class InsufficientWindow(QThetaError):
    """The achieved window does not cover the requested order."""


class UnknownIdentity(QThetaError):
    """The identity name is not registered."""


class PoleAtRequestedPoint(QThetaError):
    """A requested evaluation point lies in an identity's pole set."""
