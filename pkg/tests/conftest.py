"""Shared numeric oracles for the test suite.

These stay independent of the code paths they check: moments come from
central-difference stencils applied to the amplitude and from Gauss-Hermite
integration of the classical Gaussian, never from the closed forms under
test.
"""

import itertools

import numpy as np
import pytest

from sympcov import OscillatorSystem, WeylLabel, amplitude

# O(h^2) central stencils per derivative order: (offsets, coefficients)
_STENCILS = {
    0: ((0,), (1.0,)),
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}


def fd_weyl_moment(M, sys, index, h):
    """Symmetrized moment from central differences of the amplitude.

    Applies the tensor-product stencil of ``index`` (per-variable derivative
    orders over the stacked (a, b) label) and scales by (-1)^k hbar^(2k) for
    total order 2k.
    """
    index = np.asarray(index, dtype=int)
    h = np.broadcast_to(np.asarray(h, dtype=float), index.shape)
    order = int(index.sum())
    n = index.shape[0] // 2

    axes = [_STENCILS[m] for m in index]
    total = 0.0
    for combo in itertools.product(*(range(len(offs)) for offs, _ in axes)):
        u = np.array([axes[v][0][c] * h[v] for v, c in enumerate(combo)])
        coeff = np.prod([axes[v][1][c] for v, c in enumerate(combo)])
        total += coeff * amplitude(M, sys, WeylLabel(u[:n], u[n:]))
    total /= np.prod(h.astype(float) ** index)
    return (-1.0) ** (order // 2) * sys.hbar**order * total


def fd_covariance(M, sys, h=1e-3):
    """Full second-moment matrix from central differences of the amplitude."""
    dim = 2 * M.n
    out = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            index = np.zeros(dim, dtype=int)
            index[i] += 1
            index[j] += 1
            out[i, j] = out[j, i] = fd_weyl_moment(M, sys, index, h)
    return out


def gauss_hermite_moment(cov, index, degree=16):
    """E[prod_k xi_k^index_k] for a zero-mean Gaussian, by quadrature.

    Tensor-product Gauss-Hermite over the whitened variables; exact for
    polynomial degree below 2*degree, so an independent check of pairing
    formulas.
    """
    cov = np.asarray(cov, dtype=float)
    index = np.asarray(index, dtype=int)
    dim = cov.shape[0]
    z, w = np.polynomial.hermite_e.hermegauss(degree)
    w = w / np.sqrt(2.0 * np.pi)
    chol = np.linalg.cholesky(cov)
    total = 0.0
    for combo in itertools.product(range(degree), repeat=dim):
        zs = np.array([z[c] for c in combo])
        x = chol @ zs
        total += np.prod([w[c] for c in combo]) * np.prod(x**index)
    return total


def random_system(n, seed):
    """Seeded oscillator system with moderate masses and frequencies."""
    rng = np.random.default_rng(seed)
    return OscillatorSystem(
        hbar=1.0,
        masses=rng.uniform(0.5, 2.0, n),
        frequencies=rng.uniform(0.5, 2.0, n),
    )


@pytest.fixture
def unit_system():
    return OscillatorSystem.unit(1)
