class SuperBracketsError(Exception):
    """Base class for all errors raised by the package."""


class ChartMismatchError(SuperBracketsError):
    """Operands live on different charts."""


class ParityError(SuperBracketsError):
    """A parity requirement is violated (inhomogeneous input, wrong image parity, ...)."""


class ProvenanceError(SuperBracketsError):
    """A chart was not built by the construction an operation requires."""


class PreconditionError(SuperBracketsError):
    """A mathematical precondition fails (non-quadratic input, odd r, ...)."""


class InvariantError(SuperBracketsError):
    """An internal invariant was breached; indicates a bug."""
