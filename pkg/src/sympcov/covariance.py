"""Covariance matrices and Gaussian moments built from symplectic matrices.

The states handled here are the images of the n-oscillator vacuum under the
unitary attached to a symplectic matrix ``M``. Their Weyl characteristic
function is the real Gaussian

    W(a, b) = exp(-1/4 (a, b)^T Lambda (a, b)),

with ``Lambda = M diag(L^2 / hbar^2, L^-2) M^T`` and ``L`` the diagonal of
characteristic lengths. Every moment below follows from derivatives of that
Gaussian, so all mixed moments are **Weyl-symmetrized**: the reported
``<x p>`` entry is (<xp> + <px>)/2 and the antisymmetric i*hbar/2 part is
never included. Since the seed is the vacuum, first moments vanish and the
second moments are

    V = (hbar^2 / 2) Lambda           (physical units)
    V_q = (1/2) M M^T                 (dimensionless quadratures).

Higher even moments come from Isserlis pairing over the covariance entries.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateCovarianceError, DimensionError, OrderingError, UnsupportedOrderError
from .symplectic import ModeInterleaver, Ordering, validate_symplectic

#: Largest supported total order for Wick moments; the pairing count grows
#: as (2k - 1)!! so the cap keeps evaluation trivial.
MOMENT_ORDER_CAP = 8

#: Relative eigenvalue floor below which a covariance counts as degenerate.
PD_EIGENVALUE_FLOOR = 1e-12


class Units(Enum):
    """Unit system of a covariance matrix."""

    PHYSICAL = "physical"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class OscillatorSystem:
    """n harmonic oscillators: hbar, masses and frequencies, all positive.

    The characteristic lengths ``l_j = sqrt(hbar / (m_j w_j))`` are always
    recomputed from the stored fields.
    """

    hbar: float
    masses: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        masses = np.atleast_1d(np.array(self.masses, dtype=float))
        freqs = np.atleast_1d(np.array(self.frequencies, dtype=float))
        if masses.ndim != 1 or freqs.ndim != 1 or masses.shape != freqs.shape:
            raise DimensionError("masses and frequencies must be 1-d arrays of equal length")
        if self.hbar <= 0 or np.any(masses <= 0) or np.any(freqs <= 0):
            raise ValueError("hbar, masses and frequencies must all be strictly positive")
        masses.flags.writeable = False
        freqs.flags.writeable = False
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "frequencies", freqs)

    @property
    def n(self):
        return self.masses.shape[0]

    @property
    def lengths(self):
        return np.sqrt(self.hbar / (self.masses * self.frequencies))

    @classmethod
    def unit(cls, n):
        """hbar = m_j = w_j = 1, so every characteristic length is 1."""
        return cls(hbar=1.0, masses=np.ones(n), frequencies=np.ones(n))


@dataclass(frozen=True)
class WeylLabel:
    """Label (a, b) of a Weyl displacement: a is momentum-like, b length-like."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.array(self.a, dtype=float))
        b = np.atleast_1d(np.array(self.b, dtype=float))
        if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
            raise DimensionError("a and b must be 1-d arrays of equal length")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def stacked(self):
        """The 2n label vector (a, b) in grouped layout."""
        return np.concatenate([self.a, self.b])

    @classmethod
    def zero(cls, n):
        return cls(np.zeros(n), np.zeros(n))


class CovarianceMatrix:
    """Symmetric positive-definite 2n x 2n second-moment matrix.

    Symmetrized on construction (the asymmetry must already be below 1e-14
    relative) and rejected if any eigenvalue sits below the relative floor.
    """

    __slots__ = ("data", "ordering", "units")

    def __init__(self, data, ordering=Ordering.GROUPED, units=Units.QUADRATURE):
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
            raise DimensionError(f"expected an even square matrix, got shape {data.shape}")
        scale = float(np.max(np.abs(data)))
        if scale > 0 and float(np.max(np.abs(data - data.T))) > 1e-14 * scale:
            raise DegenerateCovarianceError("matrix is not symmetric to 1e-14 relative")
        data = 0.5 * (data + data.T)
        eigs = np.linalg.eigvalsh(data)
        if eigs[0] <= PD_EIGENVALUE_FLOOR * eigs[-1]:
            raise DegenerateCovarianceError(
                f"covariance is not positive definite: eigenvalue range [{eigs[0]:.3e}, {eigs[-1]:.3e}]"
            )
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ordering", ordering)
        object.__setattr__(self, "units", units)

    def __setattr__(self, name, value):
        raise AttributeError("CovarianceMatrix is immutable")

    @property
    def n(self):
        return self.data.shape[0] // 2

    def __repr__(self):
        return f"CovarianceMatrix(n={self.n}, ordering={self.ordering.value!r}, units={self.units.value!r})"


def _check_grouped(M, sys=None):
    if M.ordering is not Ordering.GROUPED:
        raise OrderingError("this operation requires the grouped ordering")
    if sys is not None and sys.n != M.n:
        raise DimensionError(f"mode count mismatch: matrix has n={M.n}, system n={sys.n}")


def lambda_matrix(M, sys):
    """Gaussian width matrix ``M diag(L^2 / hbar^2, L^-2) M^T``."""
    _check_grouped(M, sys)
    lengths = sys.lengths
    core = np.concatenate([lengths**2 / sys.hbar**2, 1.0 / lengths**2])
    return (M.data * core) @ M.data.T


def amplitude(M, sys, w):
    """Weyl characteristic function ``exp(-1/4 (a, b)^T Lambda (a, b))``.

    Always in (0, 1], equal to 1 only at the zero label. The label pairs
    with the grouped layout: the stacked vector is (a_1..a_n, b_1..b_n).
    """
    _check_grouped(M, sys)
    if w.n != M.n:
        raise DimensionError(f"label has n={w.n}, matrix has n={M.n}")
    u = w.stacked
    return float(np.exp(-0.25 * u @ lambda_matrix(M, sys) @ u))


def covariance_physical(M, sys):
    """Second moments of positions and momenta, ``(hbar^2 / 2) Lambda``."""
    return CovarianceMatrix(
        0.5 * sys.hbar**2 * lambda_matrix(M, sys),
        ordering=Ordering.GROUPED,
        units=Units.PHYSICAL,
    )


def lambda_quadrature(M):
    """Dimensionless width matrix ``M M^T`` (itself a symplectic matrix)."""
    _check_grouped(M)
    return M.data @ M.data.T


def lambda_quadrature_symplectic(M, tol=1e-9):
    """Diagnostic: validate that ``M M^T`` satisfies the group condition."""
    return validate_symplectic(lambda_quadrature(M), Ordering.GROUPED, tol)


def covariance_quadrature(M):
    """Quadrature covariance ``(1/2) M M^T`` (the 1/2 breaks symplecticity)."""
    return CovarianceMatrix(
        0.5 * lambda_quadrature(M), ordering=Ordering.GROUPED, units=Units.QUADRATURE
    )


def covariance_interleaved(V, interleaver=None):
    """Re-express a grouped covariance in the interleaved ordering.

    For ``V_q`` built from ``M`` this equals ``(1/2) Mt Mt^T`` with ``Mt``
    the interleaved form of ``M``.
    """
    if V.ordering is not Ordering.GROUPED:
        raise OrderingError("input covariance must be grouped")
    perm = (interleaver or ModeInterleaver(V.n)).perm
    return CovarianceMatrix(V.data[np.ix_(perm, perm)], Ordering.INTERLEAVED, V.units)


def covariance_grouped(V, interleaver=None):
    """Inverse of :func:`covariance_interleaved`; round-trips exactly."""
    if V.ordering is not Ordering.INTERLEAVED:
        raise OrderingError("input covariance must be interleaved")
    inv = np.argsort((interleaver or ModeInterleaver(V.n)).perm)
    return CovarianceMatrix(V.data[np.ix_(inv, inv)], Ordering.GROUPED, V.units)


def wick_moment(V, index):
    """Weyl-symmetrized moment of the multi-index ``index`` by Isserlis pairing.

    ``index`` lists 2n nonnegative derivative orders over the covariance's
    own coordinate layout; entry j counts how many times operator j appears
    in the (symmetrized) product. Odd total order returns 0 by parity; order
    2 reproduces the covariance entry.
    """
    index = np.asarray(index, dtype=int)
    if index.ndim != 1 or index.shape[0] != 2 * V.n:
        raise DimensionError(f"index must have length {2 * V.n}, got shape {index.shape}")
    if np.any(index < 0):
        raise ValueError("index entries must be nonnegative")
    order = int(index.sum())
    if order > MOMENT_ORDER_CAP:
        raise UnsupportedOrderError(f"total order {order} exceeds the cap {MOMENT_ORDER_CAP}")
    if order % 2:
        return 0.0
    ids = [j for j, m in enumerate(index) for _ in range(m)]
    return _pairing_sum(ids, V.data)


def _pairing_sum(ids, cov):
    if not ids:
        return 1.0
    head, rest = ids[0], ids[1:]
    total = 0.0
    for pos in range(len(rest)):
        partner = rest[pos]
        remaining = rest[:pos] + rest[pos + 1 :]
        total += cov[head, partner] * _pairing_sum(remaining, cov)
    return total
