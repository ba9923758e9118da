"""Pure-numpy quadrature kernels; fallback twin of the compiled module.

Reductions use ``np.sum`` over fixed chunks, so results are bitwise
deterministic for a fixed grid (within this backend).
"""

import numpy as np

BACKEND = "numpy"

# Rows per chunk: bounds the (chunk, len(x_in)) phase matrix to a few MB.
_CHUNK = 256


def propagate_1d(x_out, x_in, source_w, dbinv, binv, binva, inv_two_hbar):
    """Quadrature of the one-mode Gaussian kernel against a weighted source.

    out[i] = exp(i*c*dbinv*x_i^2) * sum_j exp(i*c*(binva*y_j^2 - 2*binv*x_i*y_j)) * source_w[j]

    with c = inv_two_hbar, x = x_out, y = x_in.
    """
    x_out = np.asarray(x_out, dtype=float)
    x_in = np.asarray(x_in, dtype=float)
    source_w = np.asarray(source_w, dtype=float)
    quad_in = binva * x_in**2
    out = np.empty(x_out.shape[0], dtype=np.complex128)
    for start in range(0, x_out.shape[0], _CHUNK):
        x = x_out[start : start + _CHUNK]
        phase = inv_two_hbar * (quad_in[None, :] - 2.0 * binv * x[:, None] * x_in[None, :])
        out[start : start + _CHUNK] = np.sum(np.exp(1j * phase) * source_w[None, :], axis=1)
    out *= np.exp(1j * inv_two_hbar * dbinv * x_out**2)
    return out


def propagate_2d(x_out, x_in, source_w, dbinv, binv, binva, inv_two_hbar):
    """Two-mode analogue of :func:`propagate_1d` over flattened point lists.

    ``x_out`` is (N, 2), ``x_in`` (Nin, 2); the kernel matrices are 2 x 2.
    """
    x_out = np.asarray(x_out, dtype=float)
    x_in = np.asarray(x_in, dtype=float)
    source_w = np.asarray(source_w, dtype=float)
    quad_in = np.einsum("ij,jk,ik->i", x_in, binva, x_in)
    quad_out = np.einsum("ij,jk,ik->i", x_out, dbinv, x_out)
    # cross term is x_in^T binv x_out; binv itself need not be symmetric
    two_binv_t = 2.0 * np.asarray(binv, dtype=float).T
    out = np.empty(x_out.shape[0], dtype=np.complex128)
    for start in range(0, x_out.shape[0], _CHUNK):
        cross = x_out[start : start + _CHUNK] @ two_binv_t @ x_in.T
        phase = inv_two_hbar * (quad_in[None, :] - cross)
        out[start : start + _CHUNK] = np.sum(np.exp(1j * phase) * source_w[None, :], axis=1)
    out *= np.exp(1j * inv_two_hbar * quad_out)
    return out
