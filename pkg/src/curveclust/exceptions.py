"""Exception types shared across the package."""


class DegenerateCurveError(ValueError):
    """Input curve or SRVF carries no usable geometry (zero length / zero norm)."""


class GeodesicUndefinedError(ValueError):
    """Endpoints are (numerically) antipodal: no unique minimizing geodesic."""


class OutOfInjectivityError(ValueError):
    """Tangent vector too long for the exponential map to be invertible."""


class NumericalFailureError(RuntimeError):
    """An iterative solve produced non-finite values."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration
