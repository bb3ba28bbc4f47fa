"""Exception types shared across the package."""


class HasseSchmidtError(Exception):
    """Base class for all errors raised by this package."""


class IncompatibleAmbient(HasseSchmidtError):
    """Operands live in different ambient rings (nvars or field mismatch)."""


class LengthMismatch(HasseSchmidtError):
    """Exponent vectors of different lengths were combined."""


class NotAUnit(HasseSchmidtError):
    """Inversion was requested for a series with zero constant term."""


class ComponentOutOfRange(HasseSchmidtError):
    """A component index exceeds the length of a Hasse-Schmidt derivation."""


class OrderViolation(HasseSchmidtError):
    """A pair of exponent vectors does not satisfy the support-refining order."""


class NotABasis(HasseSchmidtError):
    """The degree-1 parts of the supplied family are not a basis (determinant not a unit)."""


class PrecisionExhausted(HasseSchmidtError):
    """The requested operation would consume more precision than is available."""


class ProblemFormatError(HasseSchmidtError):
    """A JSON problem file or embedded object failed validation."""
