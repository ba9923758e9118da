import numpy as np
import pytest

import sympcov as sc


def fourier_matrix():
    return sc.SymplecticMatrix(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def admitted_random(seed, scale=0.7, min_b=0.2):
    """Seeded one-mode matrix with a usable B entry, or None."""
    M = sc.random_symplectic(1, scale=scale, seed=seed)
    return M if abs(M.data[0, 1]) >= min_b else None


@pytest.fixture(scope="module")
def fourier_spec():
    return sc.KernelSpec.build(fourier_matrix(), sc.OscillatorSystem.unit(1))


class TestKernelSpec:
    def test_rejects_singular_b(self, unit_system):
        with pytest.raises(sc.SingularMatrixError):
            sc.KernelSpec.build(sc.SymplecticMatrix.identity(1), unit_system)

    def test_rejects_interleaved(self):
        M = sc.SymplecticMatrix.identity(2, sc.Ordering.INTERLEAVED)
        with pytest.raises(sc.DimensionError):
            sc.KernelSpec.build(M, sc.OscillatorSystem.unit(2))

    def test_normalization_fourier(self, fourier_spec):
        assert fourier_spec.normalization == pytest.approx(1.0 / np.sqrt(2j * np.pi), abs=1e-15)

    def test_kernel_matrices_symmetric(self):
        sys2 = sc.OscillatorSystem.unit(2)
        built = 0
        for seed in range(200):
            M = sc.random_symplectic(2, scale=0.8, seed=seed)
            try:
                spec = sc.KernelSpec.build(M, sys2)
            except sc.SingularMatrixError:
                continue
            built += 1
            assert np.max(np.abs(spec.d_binv - spec.d_binv.T)) <= 1e-10
            assert np.max(np.abs(spec.binv_a - spec.binv_a.T)) <= 1e-10
            if built == 100:
                break
        assert built == 100


class TestKernelValue:
    def test_fourier_form(self, fourier_spec):
        # A = D = 0, B = 1 collapses the kernel to exp(-i x y) / sqrt(2 pi i)
        for x, y in ((0.0, 0.0), (1.3, 0.7), (-0.4, 2.2)):
            expected = np.exp(-1j * x * y) / np.sqrt(2j * np.pi)
            assert sc.kernel_value(fourier_spec, x, y) == pytest.approx(expected, abs=1e-15)

    def test_zero_arguments_give_normalization(self, unit_system):
        M = sc.SymplecticMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))
        spec = sc.KernelSpec.build(M, unit_system)
        assert sc.kernel_value(spec, 0.0, 0.0) == spec.normalization

    def test_constant_modulus(self, unit_system):
        M = admitted_random(0)
        spec = sc.KernelSpec.build(M, unit_system)
        mags = [
            abs(sc.kernel_value(spec, x, y))
            for x in (-2.0, 0.3, 1.7)
            for y in (-1.1, 0.0, 2.9)
        ]
        assert np.allclose(mags, abs(spec.normalization), rtol=1e-14)


class TestPropagation:
    def test_shear_near_vacuum_density(self, unit_system):
        # near-identity shear: a slightly widened Gaussian with a phase chirp
        M = sc.SymplecticMatrix(np.array([[1.0, 0.1], [0.0, 1.0]]))
        spec = sc.KernelSpec.build(M, unit_system)
        grid = sc.default_grid(spec)
        psi = sc.propagate_vacuum(spec, grid)
        assert abs(psi.norm() - 1.0) <= 1e-6
        density = np.abs(psi.values) ** 2
        vacuum = np.exp(-grid.axis(0) ** 2) / np.sqrt(np.pi)
        assert np.max(np.abs(density - vacuum)) <= 5e-3
        # the exact width is the position variance (1 + B^2)/2 = 0.505
        var = 0.505
        widened = np.exp(-grid.axis(0) ** 2 / (2 * var)) / np.sqrt(2 * np.pi * var)
        assert np.max(np.abs(density - widened)) <= 1e-12

    def test_fourier_transform_of_vacuum_is_vacuum(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        psi = sc.propagate_vacuum(fourier_spec, grid)
        density = np.abs(psi.values) ** 2
        vacuum = np.exp(-grid.axis(0) ** 2) / np.sqrt(np.pi)
        assert np.max(np.abs(density - vacuum)) <= 1e-6

    def test_unitarity_over_admitted_matrices(self, unit_system):
        checked = 0
        for seed in range(40):
            M = admitted_random(seed)
            if M is None:
                continue
            spec = sc.KernelSpec.build(M, unit_system)
            psi = sc.propagate_vacuum(spec, sc.default_grid(spec))
            assert abs(psi.norm() - 1.0) <= 1e-6
            checked += 1
        assert checked >= 20

    def test_rejects_coarse_grid(self, fourier_spec):
        with pytest.raises(sc.ResolutionError):
            sc.propagate_vacuum(fourier_spec, sc.Grid(center=(0.0,), extent=8.0, points=256))

    def test_rejects_small_extent(self, fourier_spec):
        with pytest.raises(sc.ResolutionError):
            sc.propagate_vacuum(fourier_spec, sc.Grid(center=(0.0,), extent=4.0, points=2048))

    def test_under_resolved_oscillation(self, unit_system):
        # B = 0.02 makes the kernel oscillate too fast for 512 points
        M = sc.SymplecticMatrix(np.array([[1.0, 0.02], [0.0, 1.0]]))
        spec = sc.KernelSpec.build(M, unit_system)
        with pytest.raises(sc.ResolutionError):
            sc.propagate_vacuum(spec, sc.Grid(center=(0.0,), extent=8.0, points=512))


class TestNumericAmplitude:
    def test_zero_label_is_norm(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        val = sc.numeric_amplitude(fourier_spec, sc.WeylLabel.zero(1), grid)
        assert abs(val - 1.0) <= 1e-8

    def test_fourier_momentum_label(self, fourier_spec):
        # M M^T = I so the closed form is exp(-a^2/4)
        grid = sc.default_grid(fourier_spec)
        val = sc.numeric_amplitude(fourier_spec, sc.WeylLabel([1.0], [0.0]), grid)
        assert abs(val.real - np.exp(-0.25)) <= 1e-6
        assert abs(val.imag) <= 1e-6

    def test_matches_closed_form(self, unit_system):
        rng = np.random.default_rng(99)
        checked = 0
        for seed in range(30):
            M = admitted_random(seed)
            if M is None:
                continue
            spec = sc.KernelSpec.build(M, unit_system)
            w = sc.WeylLabel(rng.uniform(-1.2, 1.2, 1), rng.uniform(-1.2, 1.2, 1))
            grid = sc.default_grid(spec, w=w)
            numeric = sc.numeric_amplitude(spec, w, grid)
            closed = sc.amplitude(M, unit_system, w)
            assert abs(numeric.real - closed) < 1e-6
            assert abs(numeric.imag) < 1e-6
            checked += 1
            if checked == 8:
                break
        assert checked == 8

    def test_grid_refinement_converges(self, fourier_spec):
        w = sc.WeylLabel([0.8], [0.37])
        base = sc.default_grid(fourier_spec, w=w)
        fine = sc.Grid(center=base.center, extent=base.extent, points=2 * base.points)
        coarse_val = sc.numeric_amplitude(fourier_spec, w, base)
        fine_val = sc.numeric_amplitude(fourier_spec, w, fine)
        assert abs(coarse_val - fine_val) < 1e-7

    def test_commensurate_shift_uses_roll(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        b = 8.0 * grid.step
        val = sc.numeric_amplitude(
            fourier_spec, sc.WeylLabel([0.5], [b]), grid, allow_offgrid=False
        )
        closed = sc.amplitude(fourier_matrix(), sc.OscillatorSystem.unit(1), sc.WeylLabel([0.5], [b]))
        assert abs(val.real - closed) < 1e-6

    def test_offgrid_shift_disabled(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        w = sc.WeylLabel([0.0], [grid.step * 0.4])
        with pytest.raises(sc.GridMismatchError):
            sc.numeric_amplitude(fourier_spec, w, grid, allow_offgrid=False)

    def test_fast_weyl_phase_rejected(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        with pytest.raises(sc.ResolutionError):
            sc.numeric_amplitude(fourier_spec, sc.WeylLabel([500.0], [0.0]), grid)

    def test_precomputed_state_reused(self, fourier_spec):
        grid = sc.default_grid(fourier_spec)
        psi = sc.propagate_vacuum(fourier_spec, grid)
        w = sc.WeylLabel([0.9], [0.0])
        a = sc.numeric_amplitude(fourier_spec, w, grid)
        b = sc.numeric_amplitude(fourier_spec, w, grid, psi=psi)
        assert a == b

    def test_second_derivatives_reproduce_covariance(self, unit_system):
        # central differences of the numeric amplitude against the moments
        M = admitted_random(1)
        spec = sc.KernelSpec.build(M, unit_system)
        grid = sc.default_grid(spec, w=sc.WeylLabel([0.0], [0.1]))
        psi = sc.propagate_vacuum(spec, grid)
        h = 1e-2

        def f(u):
            w = sc.WeylLabel([u[0]], [u[1]])
            return sc.numeric_amplitude(spec, w, grid, psi=psi).real

        V = sc.covariance_quadrature(M).data
        fd = np.zeros((2, 2))
        e = np.eye(2) * h
        f0 = f(np.zeros(2))
        for i in range(2):
            fd[i, i] = -(f(e[i]) - 2.0 * f0 + f(-e[i])) / h**2
            for j in range(i + 1, 2):
                fd[i, j] = fd[j, i] = -(
                    f(e[i] + e[j]) - f(e[i] - e[j]) - f(-e[i] + e[j]) + f(-e[i] - e[j])
                ) / (4.0 * h**2)
        assert np.max(np.abs(fd - V)) <= 1e-4 * np.max(np.abs(V))


class TestTwoModes:
    def test_nonconnected_matches_closed_form(self):
        sys2 = sc.OscillatorSystem.unit(2)
        M = sc.make_nonconnected(np.eye(2))
        spec = sc.KernelSpec.build(M, sys2)
        grid = sc.Grid(center=(0.0, 0.0), extent=8.0, points=128)
        w = sc.WeylLabel([0.5, -0.3], [0.0, 0.0])
        numeric = sc.numeric_amplitude(spec, w, grid)
        closed = sc.amplitude(M, sys2, w)
        assert abs(numeric.real - closed) < 1e-6
        assert abs(numeric.imag) < 1e-6

    def test_grid_dimension_must_match(self, fourier_spec):
        with pytest.raises(sc.DimensionError):
            sc.propagate_vacuum(fourier_spec, sc.Grid(center=(0.0, 0.0), extent=8.0, points=128))


class TestDefaultGrid:
    def test_small_b_gets_more_points(self, unit_system):
        M = sc.SymplecticMatrix(np.array([[1.0, 0.05], [0.0, 1.0]]))
        spec = sc.KernelSpec.build(M, unit_system)
        grid = sc.default_grid(spec)
        assert grid.points > 2048
        psi = sc.propagate_vacuum(spec, grid)
        assert abs(psi.norm() - 1.0) <= 1e-6

    def test_extent_covers_shift(self, fourier_spec):
        w = sc.WeylLabel([0.0], [3.0])
        assert sc.default_grid(fourier_spec, w=w).extent >= 11.0
