"""Shared exception and warning types."""


class DomainError(ValueError):
    """An argument lies outside the domain of a growth profile."""


class ArgumentError(ValueError):
    """An argument violates a documented precondition."""


class MethodError(ValueError):
    """A computation method was paired with a profile it does not support."""


class BiasWarning(UserWarning):
    """A truncation window is too small for the requested bias budget."""
