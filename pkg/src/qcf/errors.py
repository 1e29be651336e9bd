"""Exception hierarchy for the qcf package."""


class QcfError(Exception):
    """Base class for all qcf errors."""


class ConfigurationError(QcfError):
    """A parameter is outside the supported configuration range."""


class DomainError(QcfError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceError(QcfError):
    """The requested computation exceeds a resource limit."""


class InvariantError(QcfError):
    """An internal invariant was violated; indicates a bug or numerical breakdown."""
