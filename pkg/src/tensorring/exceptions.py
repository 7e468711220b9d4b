"""Exception types raised by tensorring."""


class TensorRingError(Exception):
    """Base class for all library errors."""


class ShapeError(TensorRingError, ValueError):
    """Operands have incompatible shapes."""


class IndexDomainError(TensorRingError, IndexError):
    """A mode, edge or multi-index is outside its valid range."""


class DomainError(TensorRingError, ValueError):
    """A scalar parameter is outside its domain (e.g. negative accuracy)."""


class DivisorError(TensorRingError, ValueError):
    """Requested rank does not divide the rank it must split."""

    def __init__(self, requested, rank):
        self.requested = int(requested)
        self.rank = int(rank)
        super().__init__(f"{self.requested} does not divide rank {self.rank}")


class CapacityError(TensorRingError, MemoryError):
    """Dense materialization would exceed the configured element budget."""


class DegenerateComponentError(TensorRingError, ArithmeticError):
    """A graph component has zero norm while the full tensor does not."""


class FormatError(TensorRingError, ValueError):
    """A file on disk does not follow the expected layout."""
