"""Exception types shared across the package."""


class SectorWalkError(Exception):
    """Base class for all package errors."""


class DomainError(SectorWalkError, ValueError):
    """An argument is outside the mathematically valid domain."""


class GridError(SectorWalkError, ValueError):
    """A polar grid is incompatible with the requested operation."""


class ConvergenceError(SectorWalkError, RuntimeError):
    """A numerical inversion failed to meet its error target."""


class EmptyInputError(SectorWalkError, ValueError):
    """An operation requiring data received an empty collection."""
