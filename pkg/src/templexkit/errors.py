"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`TemplexError`
so callers (and the command line) can separate data problems from bugs.
"""


class TemplexError(Exception):
    """Base class for all package errors."""


class ValidationError(TemplexError, ValueError):
    """Input data violates a structural invariant."""


# cell complexes
class DanglingFace(ValidationError):
    pass


class BoundaryNotClosed(ValidationError):
    pass


class DimensionOutOfRange(ValidationError):
    pass


class IrregularCell(ValidationError):
    pass


class SchemaError(ValidationError):
    """A JSON/CSV document does not follow the expected layout."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


# orientability
class DisconnectedSelection(ValidationError):
    pass


class MixedDimensionSelection(ValidationError):
    pass


# templex / path algebra
class MissingBinding(TemplexError):
    pass


class NotComposable(TemplexError, ValueError):
    pass


class CycleCapExceeded(TemplexError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"more than {cap} elementary cycles (found at least {count})")


class TrivialClass(TemplexError, ValueError):
    pass


# trajectories
class UnreachableNode(ValidationError):
    pass


class ItineraryGap(ValidationError):
    """A jump between non-adjacent nodes cannot be repaired unambiguously."""


class NoConsistentClass(ValidationError):
    pass


class WindowTooLarge(ValidationError):
    pass


class NonFiniteState(TemplexError, FloatingPointError):
    pass


class SeriesTooShort(ValidationError):
    pass


class EmptyCharts(ValidationError):
    pass


class LocalDimensionMismatch(ValidationError):
    def __init__(self, cluster, singular_values, message=None):
        self.cluster = cluster
        self.singular_values = singular_values
        super().__init__(message or f"cluster {cluster} fails the local dimension test")


class InsufficientPoints(ValidationError):
    pass
