"""Exception types shared across the toolkit."""


class RemotalError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(RemotalError, ValueError):
    """Invalid input: bad norm description, config field, or argument."""


class DimensionMismatch(ValidationError):
    """Operands do not share the ambient dimension."""


class SamplingFloorError(ValidationError):
    """A delta schedule reaches below the sample's discretization floor."""
