"""Exception types shared across the package."""


class GPDError(Exception):
    """Base class for all errors raised by this package."""


class CycleDetectedError(GPDError):
    """The input relation has a directed cycle, so it is not a partial order."""


class UnknownElementError(GPDError):
    """A relation or query mentions an element not declared in the poset."""


class EmptySubsetError(GPDError):
    """A subposet query received the empty set."""


class NotConnectedError(GPDError):
    """The given subposet is not connected in the Hasse diagram."""


class NotNestedError(GPDError):
    """A pair (J, I) was given with I not contained in J."""


class DimensionMismatchError(GPDError):
    """Matrix shapes (or moduli) are incompatible for the requested operation."""


class ShapeMismatchError(GPDError):
    """A diagram's map has a shape inconsistent with the node dimensions."""


class NotZigzagError(GPDError):
    """The operation requires a diagram indexed by a zigzag window."""


class NotLinearError(GPDError):
    """The operation requires a diagram indexed by a linear (Z) window."""


class InvalidIntervalError(GPDError):
    """A barcode entry is not a valid interval of the carrier poset."""


class NonMonotoneCriticalValuesError(GPDError):
    """Critical values for re-indexing must be strictly increasing."""


class EmptyDiagramError(GPDError):
    """The operation is undefined for the empty diagram."""


class DanglingEdgeError(GPDError):
    """An edge element lacks one of its two endpoint attachments."""


class MissingDecorationError(GPDError):
    """A per-decoration comparison received an undecorated point."""


class SignedDiagramError(GPDError):
    """A persistence diagram with negative entries has no matching semantics."""


class InputFormatError(GPDError):
    """A diagram file or interval spec could not be parsed or validated."""
