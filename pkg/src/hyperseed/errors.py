"""Exception hierarchy shared by every hyperseed module."""


class HyperseedError(Exception):
    """Base class; the CLI maps these to exit status 2."""


class DomainError(HyperseedError, ValueError):
    """Argument outside the domain of a function (e.g. Γ at a pole)."""


class PoleError(DomainError):
    """A lower hypergeometric parameter hits zero before the series terminates."""


class EvaluationError(HyperseedError, ArithmeticError):
    """A closed form could not be evaluated (division by zero, ...)."""


class UsageError(HyperseedError, ValueError):
    """An operation was called on input it does not accept."""


class UnsupportedFamilyError(UsageError):
    pass


class AccelerationUnreliable(HyperseedError):
    """Two-level acceleration runs disagree below the requested digits."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnknownIdentity(UsageError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
