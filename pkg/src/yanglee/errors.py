"""Shared exception types."""


class YangLeeError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(YangLeeError, ValueError):
    """Input lies outside the mathematical domain of an operation."""
