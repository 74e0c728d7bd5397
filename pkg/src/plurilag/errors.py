"""Exception hierarchy shared by every layer of the engine."""


class PluriError(Exception):
    """Base class for all engine errors."""


class ContextError(PluriError):
    """Operands live in different contexts, or an index is out of range."""


class UnsupportedOperation(PluriError):
    """The requested operation leaves the supported expression class."""


class ArityError(PluriError):
    """A list argument has the wrong length."""


class OrderOverflowError(PluriError):
    """An expression exceeds the jet order an operation is defined for."""


class DegreeOverflowError(PluriError):
    """A form already has maximal degree."""


class ReductionDivergence(PluriError):
    """Reduction modulo an equation system exceeded its step budget or looped."""


class NotADivergence(PluriError):
    """The expression has a nonzero Euler image, so no divergence witness exists."""

    def __init__(self, message, euler_images):
        super().__init__(message)
        self.euler_images = euler_images


class NotASymmetry(PluriError):
    """The witnesses do not certify the field as a variational symmetry."""


class SearchFailure(PluriError):
    """No witnesses exist inside the requested ansatz."""


class InternalInconsistency(PluriError):
    """A mandatory self-verification failed."""


class ParseError(PluriError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
