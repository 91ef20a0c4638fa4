"""Exception types shared across the package."""


class GausswellError(Exception):
    """Base class for all package-specific errors."""


class PotentialError(GausswellError):
    """Potential not admissible for the radial solver."""


class SolverError(GausswellError):
    """Radial integration failed; carries the radius reached."""

    def __init__(self, message, radius=None):
        if radius is not None:
            message = f"{message} (radius reached: {radius:.6g})"
        super().__init__(message)
        self.radius = radius


class BracketError(GausswellError):
    """Root bracket does not contain a sign change."""


class FitError(GausswellError):
    """Least-squares fit is ill-posed (rank deficient or empty data)."""
