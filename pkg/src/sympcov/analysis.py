"""Squeezing, separability, Williamson spectrum and time evolution.

All criteria operate on the quadrature covariance ``V_q = (1/2) M M^T``:

* its symplectic eigenvalues are all 1/2 (checked via the moduli of the
  eigenvalues of ``form @ V``);
* diagonal entries below the vacuum level 1/2 flag squeezing, and they equal
  half the squared row norms of ``M`` by construction;
* a pure state is separable exactly when every off-diagonal 2 x 2 mode
  coupling block of the interleaved covariance vanishes (the block-coupling
  criterion), equivalently ``sum_j A_ij A_kj^T = 0`` for i != k;
* evolution by a symplectic ``H`` maps ``M`` to ``H M``, so the covariance
  updates algebraically and the Williamson spectrum is preserved.
"""

from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix, covariance_quadrature
from .errors import DimensionError, OrderingError
from .symplectic import Ordering, SymplecticMatrix, canonical_form, convert_ordering

VACUUM_LEVEL = 0.5
DEFAULT_ANALYSIS_TOLERANCE = 1e-10


@dataclass(frozen=True)
class WilliamsonSpectrum:
    """Symplectic eigenvalues, ascending; n values, each positive."""

    kappas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kappas", np.asarray(self.kappas, dtype=float))


def symplectic_eigenvalues(V):
    """Williamson spectrum of a positive-definite covariance.

    The eigenvalues of ``form @ V`` come in +/- i*kappa pairs; the n moduli
    are returned ascending. Pairs are averaged, which absorbs round-off far
    below the 1e-9 pairing scale.
    """
    form = canonical_form(V.n, V.ordering)
    moduli = np.sort(np.abs(np.linalg.eigvals(form @ V.data)))
    kappas = 0.5 * (moduli[0::2] + moduli[1::2])
    return WilliamsonSpectrum(kappas=kappas)


@dataclass(frozen=True)
class SqueezeReport:
    """Per-axis squeezing diagnostics of the quadrature covariance.

    ``row_norms[j]`` is the Euclidean norm of row j of ``M``;
    ``diag_variances[j] = row_norms[j]**2 / 2`` is the matching diagonal
    entry of ``V_q``. An axis is squeezed when its variance sits below the
    vacuum level minus the tolerance.
    """

    row_norms: np.ndarray
    diag_variances: np.ndarray
    squeezed_indices: tuple
    vacuum_level: float
    tol: float

    @property
    def squeezed(self):
        return bool(self.squeezed_indices)


def squeeze_report(M, tol=DEFAULT_ANALYSIS_TOLERANCE):
    """Squeezing diagnostics for the state built from grouped ``M``."""
    if M.ordering is not Ordering.GROUPED:
        raise OrderingError("squeeze analysis expects the grouped ordering")
    row_norms = np.linalg.norm(M.data, axis=1)
    diag_variances = 0.5 * row_norms**2
    squeezed = tuple(int(j) for j in np.nonzero(diag_variances < VACUUM_LEVEL - tol)[0])
    return SqueezeReport(
        row_norms=row_norms,
        diag_variances=diag_variances,
        squeezed_indices=squeezed,
        vacuum_level=VACUUM_LEVEL,
        tol=float(tol),
    )


@dataclass(frozen=True)
class SeparabilityReport:
    """Mode-coupling diagnostics of the interleaved quadrature covariance.

    ``coupling_norms[(i, k)]`` (i < k) is the max-abs entry of the (i, k)
    off-diagonal 2 x 2 block of the interleaved ``V_q``; the state is
    separable exactly when all couplings vanish (within the tolerance).
    """

    coupling_norms: dict
    separable: bool
    tol: float


def separability_report(M, tol=DEFAULT_ANALYSIS_TOLERANCE):
    """Block-coupling separability test; accepts either ordering."""
    if M.ordering is Ordering.GROUPED:
        M = convert_ordering(M)
    n = M.n
    V_q = 0.5 * M.data @ M.data.T
    blocks = V_q.reshape(n, 2, n, 2).transpose(0, 2, 1, 3)
    coupling = {}
    for i in range(n):
        for k in range(i + 1, n):
            coupling[(i, k)] = float(np.max(np.abs(blocks[i, k])))
    separable = all(v <= tol for v in coupling.values())
    return SeparabilityReport(coupling_norms=coupling, separable=separable, tol=float(tol))


@dataclass(frozen=True)
class EvolutionResult:
    matrix: SymplecticMatrix
    covariance: CovarianceMatrix


def evolve(M, H):
    """Evolve the state of ``M`` by the symplectic propagator ``H``.

    Returns the propagated matrix ``H @ M`` and its quadrature covariance
    ``(1/2) (H M)(H M)^T``.
    """
    if M.n != H.n:
        raise DimensionError(f"mode count mismatch: state n={M.n}, propagator n={H.n}")
    M_t = H @ M
    return EvolutionResult(matrix=M_t, covariance=covariance_quadrature(M_t))


def harmonic_flow(sys, t):
    """Exact flow of n uncoupled oscillators in dimensionless quadratures.

    Each mode rotates by ``w_j t`` in its (q_j, p_j) plane; assembled in the
    grouped ordering.
    """
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    angles = sys.frequencies * t
    c, s = np.cos(angles), np.sin(angles)
    data = np.block([[np.diag(c), np.diag(s)], [np.diag(-s), np.diag(c)]])
    return SymplecticMatrix(data, Ordering.GROUPED)
