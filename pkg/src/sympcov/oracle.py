"""Direct quadrature of the Gaussian integral kernel attached to a symplectic matrix.

This module is the independent cross-check of the closed forms in
:mod:`sympcov.covariance`: instead of evaluating the Gaussian width matrix,
it propagates the vacuum wavefunction through the integral kernel

    C(x, y) = exp{(i / 2 hbar) [x^T D B^-1 x - 2 y^T B^-1 x + y^T B^-1 A y]}
              / sqrt((2 pi i hbar)^n det B)

on a uniform grid (trapezoid weights) and computes Weyl displacement
expectations of the propagated state numerically. Supported at one mode
(two modes work but cost grows with the fourth power of the per-axis grid).
The kernel requires an invertible B block; near-singular B is rejected
(pre-compose with a small rotation to move away from singular B).

The hot quadrature loop lives in a compiled extension when available and in
a numpy twin otherwise; set ``SYMPCOV_NO_SPEEDUPS=1`` to force the fallback.
"""

import os
from dataclasses import dataclass

import numpy as np

from .covariance import OscillatorSystem
from .errors import (
    DimensionError,
    GridMismatchError,
    ResolutionError,
    SingularMatrixError,
    SympcovError,
)
from .symplectic import Ordering, blocks_grouped

from . import _kernels as _fallback

if os.environ.get("SYMPCOV_NO_SPEEDUPS"):
    _backend = _fallback
else:
    try:
        from . import _speedups as _backend
    except ImportError:
        _backend = _fallback


def active_backend():
    """Name of the quadrature backend selected at import ("compiled" or "numpy")."""
    return _backend.BACKEND


DEFAULT_COND_CAP = 1e8
#: Minimum points per axis (one mode / two modes) and minimum extent in
#: units of the largest characteristic length.
MIN_POINTS = {1: 512, 2: 64}
MIN_EXTENT_LENGTHS = 8.0
#: An oscillation must span at least this many grid steps.
MIN_STEPS_PER_WAVELENGTH = 4.0
NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Grid:
    """Uniform grid: per-axis ``points`` points spanning center +/- extent."""

    center: tuple
    extent: float
    points: int

    def __post_init__(self):
        center = tuple(float(c) for c in np.atleast_1d(self.center))
        if len(center) not in (1, 2):
            raise DimensionError("grids are supported in one or two dimensions")
        if self.extent <= 0 or self.points < 2:
            raise ValueError("extent must be positive and points >= 2")
        object.__setattr__(self, "center", center)

    @property
    def dim(self):
        return len(self.center)

    @property
    def step(self):
        return 2.0 * self.extent / (self.points - 1)

    def axis(self, i):
        return self.center[i] + np.linspace(-self.extent, self.extent, self.points)

    def coords(self):
        """Flattened (N, dim) list of grid points, row-major."""
        axes = [self.axis(i) for i in range(self.dim)]
        if self.dim == 1:
            return axes[0][:, None]
        qq, pp = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.column_stack([qq.ravel(), pp.ravel()])

    def weights(self):
        """Flattened tensor-product trapezoid weights."""
        w1 = np.full(self.points, self.step)
        w1[0] *= 0.5
        w1[-1] *= 0.5
        if self.dim == 1:
            return w1
        return np.outer(w1, w1).ravel()

    def max_radius(self):
        """Largest Euclidean norm of any grid point."""
        corners = np.abs(np.asarray(self.center)) + self.extent
        return float(np.linalg.norm(corners))


@dataclass(frozen=True)
class KernelSpec:
    """Precomputed kernel data for a grouped matrix with invertible B block.

    ``d_binv`` and ``binv_a`` are symmetric whenever the matrix is
    symplectic; that is asserted at construction, as is the condition cap
    on B.
    """

    matrix: object
    system: OscillatorSystem
    d_binv: np.ndarray
    binv: np.ndarray
    binv_a: np.ndarray
    normalization: complex

    @classmethod
    def build(cls, M, sys, cond_cap=DEFAULT_COND_CAP):
        if M.ordering is not Ordering.GROUPED:
            raise DimensionError("kernel construction expects the grouped ordering")
        if M.n != sys.n:
            raise DimensionError(f"mode count mismatch: matrix n={M.n}, system n={sys.n}")
        A, B, _, D = blocks_grouped(M)
        cond = np.linalg.cond(B)
        if not np.isfinite(cond) or cond > cond_cap:
            raise SingularMatrixError(
                f"B block is singular or ill-conditioned (cond {cond:.3e} > cap {cond_cap:.3e}); "
                "pre-compose with a near-identity rotation to avoid singular B"
            )
        binv = np.linalg.inv(B)
        d_binv = D @ binv
        binv_a = binv @ A
        for name, mat in (("D B^-1", d_binv), ("B^-1 A", binv_a)):
            if np.max(np.abs(mat - mat.T)) > 1e-10:
                raise SympcovError(f"kernel matrix {name} is not symmetric; input is not symplectic")
        det_b = np.linalg.det(B)
        norm = 1.0 / np.sqrt(complex((2j * np.pi * sys.hbar) ** M.n * det_b))
        return cls(
            matrix=M,
            system=sys,
            d_binv=d_binv,
            binv=binv,
            binv_a=binv_a,
            normalization=norm,
        )

    @property
    def n(self):
        return self.system.n


def kernel_value(spec, x, y):
    """Kernel entry C(x, y); a pure phase times the fixed normalization."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    phase = (x @ spec.d_binv @ x - 2.0 * y @ spec.binv @ x + y @ spec.binv_a @ y) / (
        2.0 * spec.system.hbar
    )
    return spec.normalization * np.exp(1j * phase)


@dataclass(frozen=True)
class SampledWavefunction:
    """Complex field sampled on a grid, flattened row-major."""

    grid: Grid
    values: np.ndarray

    def norm(self):
        """L2 norm under the grid's trapezoid weights."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2 * self.grid.weights())))


def _vacuum_on(spec, points):
    lengths = spec.system.lengths
    psi = np.ones(points.shape[0])
    for j, l in enumerate(lengths):
        psi = psi * (np.pi * l**2) ** -0.25 * np.exp(-points[:, j] ** 2 / (2.0 * l**2))
    return psi


#: The vacuum source is negligible beyond this many characteristic lengths,
#: which bounds the region whose kernel oscillations the grid must resolve.
SOURCE_REACH_LENGTHS = 6.5


def _kernel_frequency(spec, source_radius, out_radius):
    """Upper bound on the kernel's phase gradient over the integration region."""
    return (
        np.linalg.norm(spec.binv_a, 2) * source_radius
        + np.linalg.norm(spec.binv, 2) * out_radius
    ) / spec.system.hbar


def _source_radius(spec, grid):
    reach = float(np.linalg.norm(SOURCE_REACH_LENGTHS * spec.system.lengths))
    return min(grid.max_radius(), reach)


def _check_propagation_resolution(spec, grid, out_radius):
    """Kernel oscillation must span >= MIN_STEPS_PER_WAVELENGTH grid steps."""
    freq = _kernel_frequency(spec, _source_radius(spec, grid), out_radius)
    if freq <= 0:
        return
    wavelength = 2.0 * np.pi / freq
    if wavelength < MIN_STEPS_PER_WAVELENGTH * grid.step:
        raise ResolutionError(
            f"kernel oscillation wavelength {wavelength:.3e} spans fewer than "
            f"{MIN_STEPS_PER_WAVELENGTH:g} grid steps (step {grid.step:.3e}); refine the grid"
        )


def _propagate_onto(spec, grid, x_out):
    """Raw kernel quadrature of the vacuum onto arbitrary output points."""
    coords = grid.coords()
    source_w = _vacuum_on(spec, coords) * grid.weights()
    h = 1.0 / (2.0 * spec.system.hbar)
    if spec.n == 1:
        values = _backend.propagate_1d(
            x_out[:, 0],
            coords[:, 0],
            source_w,
            float(spec.d_binv[0, 0]),
            float(spec.binv[0, 0]),
            float(spec.binv_a[0, 0]),
            h,
        )
    else:
        values = _backend.propagate_2d(
            x_out, coords, source_w, spec.d_binv, spec.binv, spec.binv_a, h
        )
    return values * spec.normalization


def propagate_vacuum(spec, grid):
    """Propagate the vacuum through the kernel by trapezoid quadrature.

    The output is checked to be unit-norm within 1e-6 (unitarity of the
    underlying map); a larger deviation means the grid under-covers or
    under-resolves the state and raises :class:`ResolutionError`.
    """
    if spec.n not in (1, 2):
        raise DimensionError("direct quadrature is supported for one or two modes only")
    if grid.dim != spec.n:
        raise DimensionError(f"grid dimension {grid.dim} does not match mode count {spec.n}")
    if grid.points < MIN_POINTS[spec.n]:
        raise ResolutionError(
            f"at least {MIN_POINTS[spec.n]} points per axis required for n={spec.n}"
        )
    max_length = float(np.max(spec.system.lengths))
    if grid.extent < MIN_EXTENT_LENGTHS * max_length:
        raise ResolutionError(
            f"grid extent {grid.extent:g} is below {MIN_EXTENT_LENGTHS:g} characteristic lengths"
        )
    _check_propagation_resolution(spec, grid, grid.max_radius())
    values = _propagate_onto(spec, grid, grid.coords())
    psi = SampledWavefunction(grid=grid, values=values)
    norm = psi.norm()
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ResolutionError(
            f"propagated state has norm {norm!r}; the grid does not cover or resolve it"
        )
    return psi


def _shifted_values(spec, psi, b, allow_offgrid):
    """Values of the propagated state at grid points displaced by b."""
    grid = psi.grid
    steps = np.asarray(b, dtype=float) / grid.step
    idx = np.rint(steps)
    if np.max(np.abs(steps - idx)) <= 1e-9:
        # commensurate shift: exact index roll with zero fill
        if grid.dim == 1:
            return _roll_zero(psi.values, int(idx[0]))
        field = psi.values.reshape(grid.points, grid.points)
        field = _roll_zero(field, int(idx[0]), axis=0)
        field = _roll_zero(field, int(idx[1]), axis=1)
        return field.ravel()
    if not allow_offgrid:
        raise GridMismatchError(
            f"shift {b!r} is not a whole number of grid steps ({grid.step!r}) "
            "and off-grid evaluation is disabled"
        )
    shifted_points = grid.coords() + np.asarray(b, dtype=float)[None, :]
    _check_propagation_resolution(
        spec, grid, grid.max_radius() + float(np.linalg.norm(b))
    )
    return _propagate_onto(spec, grid, shifted_points)


def _roll_zero(values, k, axis=0):
    out = np.zeros_like(values)
    if k == 0:
        return values.copy()
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if k > 0:
        src[axis] = slice(k, None)
        dst[axis] = slice(None, -k)
    else:
        src[axis] = slice(None, k)
        dst[axis] = slice(-k, None)
    out[tuple(dst)] = values[tuple(src)]
    return out


def numeric_amplitude(spec, w, grid, allow_offgrid=True, psi=None):
    """Weyl displacement expectation of the propagated state, by quadrature.

    Computes sum over the grid of
    ``conj(psi(x)) * exp(i (a.b/2 + a.x) / hbar) * psi(x + b)`` with
    trapezoid weights. The result should be real up to quadrature error;
    the full complex value is returned so callers can check that. A state
    already propagated on the same grid may be passed as ``psi`` to avoid
    recomputing it.
    """
    if w.n != spec.n:
        raise DimensionError(f"label has n={w.n}, kernel has n={spec.n}")
    if psi is None:
        psi = propagate_vacuum(spec, grid)
    elif psi.grid != grid:
        raise DimensionError("precomputed state was sampled on a different grid")
    hbar = spec.system.hbar
    freq = float(np.linalg.norm(w.a) + np.linalg.norm(spec.d_binv @ w.b)) / hbar
    if freq > 0 and 2.0 * np.pi / freq < MIN_STEPS_PER_WAVELENGTH * grid.step:
        raise ResolutionError(
            "Weyl phase oscillates faster than the grid resolves; refine the grid"
        )
    shifted = _shifted_values(spec, psi, w.b, allow_offgrid)
    coords = grid.coords()
    phase = (0.5 * float(w.a @ w.b) + coords @ w.a) / hbar
    integrand = np.conj(psi.values) * np.exp(1j * phase) * shifted
    return complex(np.sum(integrand * grid.weights()))


#: Hard caps on auto-sized grids; n=2 cost grows with the fourth power of
#: the per-axis count, so it stays modest and over-demanding kernels raise.
MAX_AUTO_POINTS = {1: 32768, 2: 192}
#: Auto-sizing aims slightly above the resolution guard.
AUTO_STEPS_PER_WAVELENGTH = 4.25


def default_grid(spec, w=None, points=None):
    """Grid sized to cover the propagated Gaussian and any requested shift.

    The packet spread along axis j is read off the rows of the matrix
    blocks (A l^2 A^T + B hbar^2 L^-2 B^T scaled by 1/2); the extent covers
    eight times the larger of that and the characteristic length. When
    ``points`` is not given, the per-axis count is raised (within a cap)
    until the kernel oscillation is resolved.
    """
    A, B, _, _ = blocks_grouped(spec.matrix)
    lengths = spec.system.lengths
    spread = np.sqrt(
        0.5 * ((A**2 * lengths**2).sum(axis=1) + (B**2 * (spec.system.hbar / lengths) ** 2).sum(axis=1))
    )
    reach = MIN_EXTENT_LENGTHS * max(float(np.max(lengths)), float(np.max(spread)))
    if w is not None:
        reach += float(np.max(np.abs(w.b)))
    if points is None:
        points = 2048 if spec.n == 1 else 128
        out_radius = reach * np.sqrt(spec.n) + (
            float(np.linalg.norm(w.b)) if w is not None else 0.0
        )
        src_radius = min(out_radius, float(np.linalg.norm(SOURCE_REACH_LENGTHS * lengths)))
        freq = _kernel_frequency(spec, src_radius, out_radius)
        if w is not None:
            freq = max(freq, float(np.linalg.norm(w.a)) / spec.system.hbar)
        if freq > 0:
            needed = int(np.ceil(AUTO_STEPS_PER_WAVELENGTH * reach * freq / np.pi)) + 1
            points = max(points, min(needed, MAX_AUTO_POINTS[spec.n]))
    return Grid(center=(0.0,) * spec.n, extent=reach, points=points)
