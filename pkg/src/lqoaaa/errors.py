"""Exception classes raised by :mod:`lqoaaa`."""


class LqoError(Exception):
    """Base class for all errors raised by this package."""


class NumericalError(LqoError):
    """Singularities and other numerical failures."""


class DataError(LqoError):
    """Malformed or inconsistent input data."""


class SingularShift(NumericalError):
    """``s I - A`` is numerically singular: the shift is a pole of the system."""

    def __init__(self, point, variable="s"):
        self.point = complex(point)
        self.variable = variable
        super().__init__(f"{variable}={_fmt(point)} is a pole (sI - A is singular)")


class ZeroDenominator(NumericalError):
    """The barycentric denominator vanishes at a non-support point."""

    def __init__(self, point, variable="s"):
        self.point = complex(point)
        self.variable = variable
        super().__init__(f"barycentric denominator D({variable}) vanishes at {_fmt(point)}")


class NonFiniteState(NumericalError):
    """The simulated state left the range of floating point numbers."""


class ZeroWeight(NumericalError):
    """A barycentric weight is exactly zero."""


class EmptyRemainder(NumericalError):
    """Every sample point is a support point, no least-squares rows remain."""


class InsufficientData(DataError):
    """Too few sample points for the requested order."""


class DegenerateData(DataError):
    """Data is constant; a constant approximant is already exact."""


class ParseError(DataError):
    """A file could not be parsed."""


class DimensionMismatch(DataError):
    """A field of a model file has the wrong shape."""

    def __init__(self, field, expected, got):
        self.field = field
        super().__init__(f"field {field!r}: expected shape {expected}, got {got}")


class GridMismatch(DataError):
    """The H2 sample grid is not N_s x N_s."""


class DuplicatePoints(DataError):
    """Two sample or support points coincide."""


def _fmt(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}j"
