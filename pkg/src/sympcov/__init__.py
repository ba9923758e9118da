"""Gaussian-state covariance matrices built directly from symplectic matrices.

The covariance of the state attached to a symplectic matrix ``M`` is the
closed form ``(1/2) M M^T`` in dimensionless quadratures (and the
length-weighted analogue in physical units); squeezing, mode-coupling
separability, Williamson spectra and time evolution all reduce to matrix
algebra on ``M``. An independent quadrature oracle re-derives displacement
expectations by direct integration of the underlying Gaussian kernel.
"""

from .analysis import (
    EvolutionResult,
    SeparabilityReport,
    SqueezeReport,
    WilliamsonSpectrum,
    evolve,
    harmonic_flow,
    separability_report,
    squeeze_report,
    symplectic_eigenvalues,
)
from .covariance import (
    CovarianceMatrix,
    OscillatorSystem,
    Units,
    WeylLabel,
    amplitude,
    covariance_grouped,
    covariance_interleaved,
    covariance_physical,
    covariance_quadrature,
    lambda_matrix,
    lambda_quadrature,
    lambda_quadrature_symplectic,
    wick_moment,
)
from .errors import (
    DegenerateCovarianceError,
    DimensionError,
    GridMismatchError,
    NotSymplecticError,
    OrderingError,
    ResolutionError,
    SingularMatrixError,
    SympcovError,
    UnsupportedOrderError,
)
from .oracle import (
    Grid,
    KernelSpec,
    SampledWavefunction,
    active_backend,
    default_grid,
    kernel_value,
    numeric_amplitude,
    propagate_vacuum,
)
from .symplectic import (
    DEFAULT_TOLERANCE,
    ModeInterleaver,
    Ordering,
    SymplecticMatrix,
    ValidationResult,
    block_conditions_grouped,
    block_conditions_interleaved,
    blocks_grouped,
    blocks_interleaved,
    canonical_form,
    convert_ordering,
    grouped_block_residuals,
    interleaved_block_residuals,
    make_nonconnected,
    omega_grouped,
    omega_interleaved,
    random_symplectic,
    validate_symplectic,
)

__version__ = "0.1.0"
