"""Exception hierarchy shared across the toolkit."""


class ComboptError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ComboptError):
    """A value is outside its permitted domain (sizes, bounds, NaN/inf)."""


class ShapeError(ComboptError):
    """Operand shapes are incompatible for the requested operation."""


class TypeErrorDomain(ComboptError):
    """A node of the wrong kind was used (e.g. arithmetic where a comparison is required)."""


class StateError(ComboptError):
    """The object is in the wrong state for the call, or a State is structurally invalid."""


class ParseError(ComboptError):
    """An instance file could not be parsed."""


class SizeError(ComboptError):
    """The instance exceeds the size cap of an exact method."""


class MetricError(ComboptError):
    """A benchmark metric could not be computed (e.g. missing reference optimum)."""
