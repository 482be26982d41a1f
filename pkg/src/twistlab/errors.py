class TwistError(Exception):
    """Base class for errors raised by twistlab."""


class StructuralError(TwistError):
    """Malformed input or incompatible operands."""


class RingMismatch(StructuralError):
    pass


class HypothesisError(TwistError):
    """A construction hypothesis failed; ``witness`` locates the failure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


class ExtensionError(TwistError):
    """The extension recursion cannot be evaluated (cycle or missing data)."""


class InternalError(TwistError):
    """Two independent computations that must agree did not."""
