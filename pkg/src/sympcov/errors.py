"""Exception types shared across the package."""


class SympcovError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(SympcovError, ValueError):
    """Input matrix or vector has an incompatible shape."""


class OrderingError(SympcovError, ValueError):
    """Operation received a matrix in the wrong phase-space ordering."""


class SingularMatrixError(SympcovError, ValueError):
    """A matrix that must be invertible is singular or too ill-conditioned."""


class NotSymplecticError(SympcovError, ValueError):
    """Matrix failed the symplectic group condition at the given tolerance."""


class DegenerateCovarianceError(SympcovError, ValueError):
    """Covariance matrix is not positive definite at the required floor."""


class UnsupportedOrderError(SympcovError, ValueError):
    """Requested moment order exceeds the configured cap."""


class ResolutionError(SympcovError, ValueError):
    """Quadrature grid cannot resolve the integrand's oscillations."""


class GridMismatchError(SympcovError, ValueError):
    """Requested shift is not representable on the grid and off-grid evaluation is disabled."""
