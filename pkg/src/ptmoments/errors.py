"""Exception hierarchy shared by the numeric modules and the CLI."""


class PtMomentsError(Exception):
    """Base class for all package errors."""


class ValidationError(PtMomentsError, ValueError):
    """Input violates a structural invariant (Hermiticity, trace, positivity...).

    ``violations`` lists every failed check found, not only the first.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ShapeError(ValidationError):
    """Operand shapes are incompatible with the requested operation."""


class HermiticityError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class RangeError(ValidationError):
    """A scalar parameter lies outside its admissible range."""


class PremiseError(ValidationError):
    """Measured quantities do not satisfy the premises of a construction.

    ``values`` maps the quantity names to what was measured.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = dict(values or {})


class NumericalError(PtMomentsError, ArithmeticError):
    """A numerical routine produced an inconsistent result."""


class ConvergenceError(NumericalError):
    """Iterative eigensolver did not converge.

    ``residual`` is the relative off-diagonal Frobenius norm reached.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual
