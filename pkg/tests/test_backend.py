"""Parity and determinism checks between the compiled and numpy kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from sympcov import _kernels

try:
    from sympcov import _speedups
except ImportError:
    _speedups = None

needs_speedups = pytest.mark.skipif(_speedups is None, reason="compiled extension not built")


def sample_inputs_1d(seed, n_out=400, n_in=500):
    rng = np.random.default_rng(seed)
    x_out = np.sort(rng.uniform(-8, 8, n_out))
    x_in = np.linspace(-8, 8, n_in)
    source = np.exp(-x_in**2 / 2.0) * rng.uniform(0.5, 1.5, n_in)
    return x_out, x_in, source, rng.uniform(-2, 2), rng.uniform(0.5, 2), rng.uniform(-2, 2), 0.5


def sample_inputs_2d(seed, n_out=150, n_in=200):
    rng = np.random.default_rng(seed)
    x_out = rng.uniform(-5, 5, (n_out, 2))
    x_in = rng.uniform(-5, 5, (n_in, 2))
    source = np.exp(-np.sum(x_in**2, axis=1) / 2.0)
    dbinv = rng.uniform(-1, 1, (2, 2))
    dbinv = dbinv + dbinv.T
    binv = rng.uniform(-1, 1, (2, 2))
    binva = rng.uniform(-1, 1, (2, 2))
    binva = binva + binva.T
    return x_out, x_in, source, dbinv, binv, binva, 0.5


@needs_speedups
class TestParity:
    def test_propagate_1d(self):
        for seed in range(5):
            args = sample_inputs_1d(seed)
            a = _speedups.propagate_1d(*args)
            b = _kernels.propagate_1d(*args)
            assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))

    def test_propagate_2d(self):
        for seed in range(3):
            args = sample_inputs_2d(seed)
            a = _speedups.propagate_2d(*args)
            b = _kernels.propagate_2d(*args)
            assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


class TestDeterminism:
    def test_numpy_bitwise(self):
        args = sample_inputs_1d(7)
        assert np.array_equal(_kernels.propagate_1d(*args), _kernels.propagate_1d(*args))
        args2 = sample_inputs_2d(7)
        assert np.array_equal(_kernels.propagate_2d(*args2), _kernels.propagate_2d(*args2))

    @needs_speedups
    def test_compiled_bitwise(self):
        args = sample_inputs_1d(7)
        assert np.array_equal(_speedups.propagate_1d(*args), _speedups.propagate_1d(*args))


class TestSelection:
    def test_active_backend_name(self):
        import sympcov

        if os.environ.get("SYMPCOV_NO_SPEEDUPS") or _speedups is None:
            expected = "numpy"
        else:
            expected = "compiled"
        assert sympcov.active_backend() == expected

    def test_env_var_forces_fallback(self):
        env = dict(os.environ, SYMPCOV_NO_SPEEDUPS="1")
        out = subprocess.run(
            [sys.executable, "-c", "import sympcov; print(sympcov.active_backend())"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert out.stdout.strip() == "numpy"
