"""Exception hierarchy shared by all modules."""


class CircuitCertError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CircuitCertError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionError(CircuitCertError, ValueError):
    pass


class DegenerateSimplexError(CircuitCertError, ValueError):
    pass


class CircuitError(CircuitCertError, ValueError):
    """The support is not a valid circuit for the requested operation."""


class BoundaryInnerPoint(CircuitError):
    """The inner exponent lies on the boundary of the simplex.

    Callers should reduce to the smallest face containing it
    (see :func:`circuitcert.certify.reduce_boundary_inner_point`).
    """

    def __init__(self, message, inner=None, lambdas=None):
        self.inner = inner
        self.lambdas = lambdas
        super().__init__(message)


class PrecisionError(CircuitCertError, ArithmeticError):
    """Numerical verification failed even at the highest precision tried."""


class ShapeError(CircuitCertError, ValueError):
    pass
