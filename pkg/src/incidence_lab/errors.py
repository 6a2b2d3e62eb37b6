"""Exception types shared across the package."""


class IncidenceLabError(Exception):
    """Base class for all package errors."""


class FieldMismatchError(IncidenceLabError):
    """Operands belong to different fields."""


class InvalidInputError(IncidenceLabError, ValueError):
    """Input violates a documented precondition."""


class InvalidFamilyError(InvalidInputError):
    """Curve family is malformed (dependent span) or a curve lies outside it."""


class ConstructionFailureError(IncidenceLabError):
    """Partition bisection search exhausted its ladder without a verified factor."""


class InternalConsistencyError(IncidenceLabError):
    """Two routes that must agree exactly (e.g. partitioned vs brute count) diverged."""


class GenerationError(IncidenceLabError):
    """A generator could not produce the requested configuration."""
