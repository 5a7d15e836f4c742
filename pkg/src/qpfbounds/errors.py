class DomainError(ValueError):
    """An argument violates a documented precondition."""


class CapacityError(DomainError):
    """The instance is too large for a table-driven or enumerating routine."""


class OverlapError(RuntimeError):
    """Success windows of neighbouring peaks overlap (tolerance too large)."""
