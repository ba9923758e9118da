"""Symplectic matrices in the two phase-space orderings.

A real 2n x 2n matrix ``M`` is symplectic when it preserves the canonical
antisymmetric form of its ordering:

* grouped ordering ``(q_1..q_n, p_1..p_n)``: ``M @ Omega @ M.T = Omega`` with
  ``Omega = [[0, I], [-I, 0]]`` in n x n blocks;
* interleaved ordering ``(q_1, p_1, ..., q_n, p_n)``: the form is the block
  diagonal of n copies of ``J = [[0, 1], [-1, 0]]``.

The module provides validation against either condition, the equivalent block
identities, conversion between the orderings (a pure permutation), seeded
random generation through the exponential map, and the non-connected family
``[[0, B], [-B^-T, 0]]`` that the exponential map cannot reach.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, OrderingError, SingularMatrixError, NotSymplecticError

DEFAULT_TOLERANCE = 1e-10
#: Tolerance used when composing validated matrices; round-off in products of
#: desk-scale matrices can exceed the construction default.
PRODUCT_TOLERANCE = 1e-9


class Ordering(Enum):
    """Phase-space coordinate layout of a 2n x 2n matrix."""

    GROUPED = "grouped"
    INTERLEAVED = "interleaved"


def omega_grouped(n):
    """Canonical form [[0, I], [-I, 0]] for the grouped ordering."""
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def omega_interleaved(n):
    """Canonical form blockdiag(J, ..., J), J = [[0, 1], [-1, 0]]."""
    omega = np.zeros((2 * n, 2 * n))
    for k in range(n):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def canonical_form(n, ordering):
    """Canonical antisymmetric form for ``ordering``."""
    if ordering is Ordering.GROUPED:
        return omega_grouped(n)
    return omega_interleaved(n)


def _as_even_square(data):
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {data.shape}")
    if data.shape[0] % 2 != 0 or data.shape[0] < 2:
        raise DimensionError(f"matrix dimension must be even and >= 2, got {data.shape[0]}")
    return data


@dataclass(frozen=True)
class ValidationResult:
    residual: float
    is_symplectic: bool


def validate_symplectic(data, ordering=Ordering.GROUPED, tol=DEFAULT_TOLERANCE):
    """Check the symplectic group condition for ``data`` under ``ordering``.

    Returns a :class:`ValidationResult` whose ``residual`` is the max-abs
    entry of ``M @ form @ M.T - form``.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    data = _as_even_square(data)
    form = canonical_form(data.shape[0] // 2, ordering)
    residual = float(np.max(np.abs(data @ form @ data.T - form)))
    return ValidationResult(residual=residual, is_symplectic=residual <= tol)


@dataclass(frozen=True)
class ModeInterleaver:
    """Orthogonal permutation between interleaved and grouped coordinates.

    ``perm[j]`` is the grouped position of interleaved coordinate ``j``:
    position ``2k`` (a coordinate) goes to ``k`` and position ``2k + 1``
    (a momentum) goes to ``n + k``.
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("mode count must be >= 1")

    @property
    def perm(self):
        perm = np.empty(2 * self.n, dtype=np.intp)
        perm[0::2] = np.arange(self.n)
        perm[1::2] = self.n + np.arange(self.n)
        return perm

    @property
    def matrix(self):
        """Permutation matrix G with grouped = G @ interleaved (integer entries)."""
        g = np.zeros((2 * self.n, 2 * self.n), dtype=int)
        g[self.perm, np.arange(2 * self.n)] = 1
        return g

    def to_grouped(self, vec):
        """Reorder an interleaved coordinate array into grouped layout."""
        vec = np.asarray(vec)
        out = np.empty_like(vec)
        out[self.perm] = vec
        return out

    def to_interleaved(self, vec):
        """Reorder a grouped coordinate array into interleaved layout."""
        return np.asarray(vec)[self.perm]


class SymplecticMatrix:
    """A validated 2n x 2n symplectic matrix tagged with its ordering.

    Construction validates the group condition at ``tolerance`` (max-abs
    residual) plus the ``det = +1`` sanity check, then freezes the data.
    Matrices compose with ``@`` (same ordering only).
    """

    __slots__ = ("data", "ordering", "tolerance")

    def __init__(self, data, ordering=Ordering.GROUPED, tolerance=DEFAULT_TOLERANCE):
        data = _as_even_square(data).copy()
        result = validate_symplectic(data, ordering, tolerance)
        if not result.is_symplectic:
            raise NotSymplecticError(
                f"matrix is not symplectic under the {ordering.value} form: "
                f"residual {result.residual:.3e} > tolerance {tolerance:.3e}"
            )
        det = float(np.linalg.det(data))
        if abs(det - 1.0) > max(tolerance, 1e-9):
            raise NotSymplecticError(f"determinant {det!r} deviates from +1 beyond tolerance")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ordering", ordering)
        object.__setattr__(self, "tolerance", float(tolerance))

    def __setattr__(self, name, value):
        raise AttributeError("SymplecticMatrix is immutable")

    @property
    def n(self):
        return self.data.shape[0] // 2

    def __matmul__(self, other):
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if self.ordering is not other.ordering:
            raise OrderingError("cannot compose matrices with different orderings")
        tol = max(self.tolerance, other.tolerance, PRODUCT_TOLERANCE)
        return SymplecticMatrix(self.data @ other.data, self.ordering, tol)

    def __repr__(self):
        return (
            f"SymplecticMatrix(n={self.n}, ordering={self.ordering.value!r}, "
            f"tolerance={self.tolerance!r})"
        )

    @classmethod
    def identity(cls, n, ordering=Ordering.GROUPED):
        return cls(np.eye(2 * n), ordering)


def blocks_grouped(M):
    """The (A, B, C, D) n x n blocks of a grouped matrix (read-only views)."""
    if M.ordering is not Ordering.GROUPED:
        raise OrderingError("block layout A, B, C, D requires the grouped ordering")
    n = M.n
    d = M.data
    return d[:n, :n], d[:n, n:], d[n:, :n], d[n:, n:]


def blocks_interleaved(M):
    """The n x n grid of 2 x 2 mode blocks of an interleaved matrix.

    Returns an (n, n, 2, 2) view; ``out[i, j]`` couples mode i to mode j.
    """
    if M.ordering is not Ordering.INTERLEAVED:
        raise OrderingError("2 x 2 mode blocks require the interleaved ordering")
    n = M.n
    return M.data.reshape(n, 2, n, 2).transpose(0, 2, 1, 3)


@dataclass(frozen=True)
class GroupedBlockResiduals:
    """Max-abs residuals of the three grouped block identities:
    A D^T - B C^T = I, A B^T = B A^T, C D^T = D C^T."""

    r1: float
    r2: float
    r3: float

    def max(self):
        return max(self.r1, self.r2, self.r3)


def grouped_block_residuals(data):
    """Grouped block identity residuals for raw (possibly invalid) data."""
    data = _as_even_square(data)
    n = data.shape[0] // 2
    A, B, C, D = data[:n, :n], data[:n, n:], data[n:, :n], data[n:, n:]
    eye = np.eye(n)
    r1 = float(np.max(np.abs(A @ D.T - B @ C.T - eye)))
    r2 = float(np.max(np.abs(A @ B.T - B @ A.T)))
    r3 = float(np.max(np.abs(C @ D.T - D @ C.T)))
    return GroupedBlockResiduals(r1, r2, r3)


def block_conditions_grouped(M):
    """Evaluate the grouped block identities equivalent to the group condition."""
    if M.ordering is not Ordering.GROUPED:
        raise OrderingError("block layout A, B, C, D requires the grouped ordering")
    return grouped_block_residuals(M.data)


@dataclass(frozen=True)
class InterleavedBlockResiduals:
    """Residuals of the interleaved block identities.

    ``diag[i]`` is the max-abs residual of ``sum_j A_ij J A_ij^T - J``;
    ``cross[(i, k)]`` (i < k) of ``sum_j A_ij J A_kj^T``.
    """

    diag: np.ndarray
    cross: dict

    def max(self):
        worst = float(np.max(self.diag))
        if self.cross:
            worst = max(worst, max(self.cross.values()))
        return worst


def interleaved_block_residuals(data):
    """Interleaved block identity residuals for raw (possibly invalid) data."""
    data = _as_even_square(data)
    n = data.shape[0] // 2
    blocks = data.reshape(n, 2, n, 2).transpose(0, 2, 1, 3)
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    diag = np.empty(n)
    cross = {}
    for i in range(n):
        acc = sum(blocks[i, j] @ j2 @ blocks[i, j].T for j in range(n))
        diag[i] = np.max(np.abs(acc - j2))
        for k in range(i + 1, n):
            acc = sum(blocks[i, j] @ j2 @ blocks[k, j].T for j in range(n))
            cross[(i, k)] = float(np.max(np.abs(acc)))
    return InterleavedBlockResiduals(diag=diag, cross=cross)


def block_conditions_interleaved(M):
    """Evaluate the per-mode block identities of an interleaved matrix."""
    if M.ordering is not Ordering.INTERLEAVED:
        raise OrderingError("2 x 2 mode blocks require the interleaved ordering")
    return interleaved_block_residuals(M.data)


def convert_ordering(M):
    """Re-express ``M`` in the other ordering via the mode interleaver.

    A pure permutation of entries, so converting twice returns the original
    data bit-identically.
    """
    perm = ModeInterleaver(M.n).perm
    if M.ordering is Ordering.GROUPED:
        data = M.data[np.ix_(perm, perm)]
        target = Ordering.INTERLEAVED
    else:
        inv = np.argsort(perm)
        data = M.data[np.ix_(inv, inv)]
        target = Ordering.GROUPED
    return SymplecticMatrix(data, target, M.tolerance)


def random_symplectic(n, scale=1.0, seed=0):
    """Seeded random element of the identity component, ``exp(Omega S)``.

    ``S`` is symmetric with entries uniform in [-scale, scale]; ``Omega S``
    is then a Hamiltonian matrix, so the exponential lands in the group.
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise DimensionError("mode count must be >= 1")
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    upper = rng.uniform(-scale, scale, size=(2 * n, 2 * n))
    sym = np.triu(upper) + np.triu(upper, 1).T
    data = expm(omega_grouped(n) @ sym)
    return SymplecticMatrix(data, Ordering.GROUPED)


def make_nonconnected(B, cond_cap=1e12):
    """Build ``[[0, B], [-B^-T, 0]]`` from an invertible n x n matrix ``B``.

    These elements are not reachable by the exponential construction of
    :func:`random_symplectic`; composing them with random elements gives
    test points away from the identity component.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {B.shape}")
    cond = np.linalg.cond(B)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularMatrixError(
            f"matrix is singular or too ill-conditioned (cond {cond:.3e} > cap {cond_cap:.3e})"
        )
    n = B.shape[0]
    data = np.zeros((2 * n, 2 * n))
    data[:n, n:] = B
    data[n:, :n] = -np.linalg.inv(B).T
    return SymplecticMatrix(data, Ordering.GROUPED)
