"""
Unit tests for collective dephasing.
"""

import numpy as np
import pytest

from spintop.exceptions import DimensionMismatchError, ValidationError
from spintop.physics.decoherence import (
    DephasingParams,
    dephasing_factors,
    dephasing_rate,
    evolve_dephasing,
    integrate_master_equation,
    long_time_correspondence,
    p_propagator,
    short_time_factor,
    suppression_correlation,
)
from spintop.physics.propagators import bilinear_kernel
from spintop.physics.quantum_top import TopParams, evolve_unitary
from spintop.physics.spin_core import PhasePoint, SpinQuantum

from tests.fixtures import create_coherent_projector, create_test_density_matrix


class TestExactDephasing:
    """Test the closed-form solution of the master equation."""

    def test_zero_rate_is_unitary(self, twist_params, rng):
        """Test gamma = 0 reduces to unitary evolution."""
        rho = create_test_density_matrix(twist_params.spin, rng)
        dephased = evolve_dephasing(rho, DephasingParams(0.0, twist_params), 2.3)
        np.testing.assert_allclose(dephased.matrix, evolve_unitary(rho, twist_params, 2.3).matrix, atol=1e-14)

    def test_populations_conserved(self, rng):
        """Test the diagonal never changes and coherences decay."""
        spin = SpinQuantum(4)
        rho = create_test_density_matrix(spin, rng)
        dephased = evolve_dephasing(rho, DephasingParams(0.8, TopParams(0.1, 1.0, spin)), 3.0)
        np.testing.assert_allclose(np.diag(dephased.matrix), np.diag(rho.matrix), atol=1e-14)
        assert np.all(np.abs(dephased.matrix) <= np.abs(rho.matrix) + 1e-14)
        assert dephased.purity < rho.purity

    @pytest.mark.parametrize("two_s", [1, 2, 3])
    def test_matches_lindblad_integration(self, two_s, rng):
        """Test the closed form against RK45 integration of the Lindblad form."""
        spin = SpinQuantum(two_s)
        dp = DephasingParams(0.4, TopParams(0.3, 1.0, spin))
        rho = create_test_density_matrix(spin, rng)
        times = [0.0, 0.5, 1.0]
        integrated = integrate_master_equation(rho, dp, times)
        for index, t in enumerate(times):
            np.testing.assert_allclose(integrated[index], evolve_dephasing(rho, dp, t).matrix, atol=1e-8)

    @pytest.mark.parametrize("gamma,t", [(0.3, 0.5), (1.0, 2.0), (2.5, 0.1)])
    def test_spin_one_extreme_coherence_decay(self, gamma, t, rng):
        """Test at s = 1 the m = 1, m = -1 coherence decays as e^{-2 gamma t}."""
        spin = SpinQuantum(2)
        rho = create_test_density_matrix(spin, rng)
        dephased = evolve_dephasing(rho, DephasingParams(gamma, TopParams(0.4, 1.0, spin)), t)
        assert dephasing_factors(spin, gamma, t)[0, 2] == pytest.approx(np.exp(-2.0 * gamma * t))
        assert abs(dephased.matrix[0, 2]) == pytest.approx(abs(rho.matrix[0, 2]) * np.exp(-2.0 * gamma * t))
        assert abs(dephased.matrix[0, 1]) == pytest.approx(abs(rho.matrix[0, 1]) * np.exp(-0.5 * gamma * t))

    def test_output_stays_positive(self, rng):
        """Test the dephased state has no negative eigenvalue for 50 random inputs."""
        for index in range(50):
            spin = SpinQuantum(1 + index % 5)
            dp = DephasingParams(rng.uniform(0.0, 3.0), TopParams(rng.uniform(-1.0, 1.0), 1.0, spin))
            dephased = evolve_dephasing(create_test_density_matrix(spin, rng), dp, rng.uniform(0.0, 5.0))
            assert dephased.eigenvalues[0] >= -1e-10

    def test_integrator_rejects_decreasing_times(self, twist_params):
        """Test times must be non-decreasing."""
        rho = create_coherent_projector(twist_params.spin)
        with pytest.raises(ValidationError):
            integrate_master_equation(rho, DephasingParams(0.1, twist_params), [1.0, 0.5])

    def test_negative_rate_rejected(self, twist_params):
        """Test gamma must be non-negative."""
        with pytest.raises(ValidationError):
            DephasingParams(-0.1, twist_params)

    def test_spin_mismatch(self, twist_params):
        """Test a state of another spin is rejected."""
        with pytest.raises(DimensionMismatchError):
            evolve_dephasing(create_coherent_projector(SpinQuantum(3)), DephasingParams(0.1, twist_params), 1.0)


class TestOffDiagonalPropagator:
    """Test P(z; z1, z2, t) and its short-time suppression."""

    def test_zero_rate_is_bilinear_kernel(self, twist_params):
        """Test P with gamma = 0 equals L(z,z1) conj(L(z,z2))."""
        dp = DephasingParams(0.0, twist_params)
        z, z1, z2 = 0.3 + 0.1j, -0.4 + 0.8j, 1.5
        assert p_propagator(z, z1, z2, 1.1, dp) == pytest.approx(bilinear_kernel(z, z1, z2, 1.1, twist_params), abs=1e-14)

    def test_short_time_factor_bounds(self, spin_one):
        """Test the factor is 1 on |z1| = |z2| and below 1 otherwise."""
        assert short_time_factor(0.5, 0.5j, 1.0, spin_one, 0.1) == pytest.approx(1.0)
        assert short_time_factor(0.2, 3.0, 1.0, spin_one, 0.1) < 1.0

    @pytest.mark.parametrize("z2", [1e6, PhasePoint(np.pi, 0.0)])
    def test_short_time_factor_pole_to_pole_limit(self, z2):
        """Test z1 = 0 and z2 -> infinity give X^2 -> 1, so the factor is 1 - gamma s t / 2."""
        spin = SpinQuantum(40)
        gamma, t = 0.5, 1e-3
        assert short_time_factor(0.0, z2, gamma, spin, t) == pytest.approx(1.0 - gamma * spin.s * t / 2.0, abs=1e-12)

    @pytest.mark.parametrize("z,z1,z2", [(0.4, 0.9, 2.0), (1.3, 0.2, 0.7), (0.5, 0.5, 0.5)])
    def test_magnitude_never_grows_without_hamiltonian(self, z, z1, z2):
        """Test |P| is non-increasing in t at H = 0 (positive labels give positive weights)."""
        spin = SpinQuantum(4)
        dp = DephasingParams(0.7, TopParams(0.0, 0.0, spin))
        magnitudes = [abs(p_propagator(z, z1, z2, t, dp)) for t in np.linspace(0.0, 6.0, 40)]
        assert all(later <= earlier + 1e-15 for earlier, later in zip(magnitudes, magnitudes[1:]))
        assert magnitudes[-1] < magnitudes[0]

    def test_short_time_factor_rejects_negative_time(self, spin_one):
        with pytest.raises(ValidationError):
            short_time_factor(0.2, 3.0, 1.0, spin_one, -0.1)

    @pytest.mark.parametrize("r", [0.5, 0.2])
    def test_large_spin_rate(self, r):
        """Test the decay rate approaches s X^2 / 2 with its O(1) correction."""
        spin = SpinQuantum(80)
        theta1 = PhasePoint.from_z(r).theta
        rate = dephasing_rate(r, r, 1.0 / r, spin)
        expected = spin.s * np.cos(theta1) ** 2 / 2.0 + (1.0 + np.sin(theta1) ** 2) / 4.0
        assert rate.real == pytest.approx(expected, rel=0.1)

    def test_rate_matches_finite_difference(self):
        """Test the rate against the exact P at a tiny gamma t."""
        spin = SpinQuantum(6)
        dp = DephasingParams(1.0, TopParams(0.0, 0.0, spin))
        z, z1, z2 = 0.4, 0.4, 2.5
        ratio = p_propagator(z, z1, z2, 1e-6, dp) / p_propagator(z, z1, z2, 0.0, dp)
        assert (1.0 - ratio) / 1e-6 == pytest.approx(dephasing_rate(z, z1, z2, spin), rel=1e-4)

    def test_suppression_tracks_x_squared(self):
        """Test larger X^2 means stronger suppression."""
        correlation = suppression_correlation(SpinQuantum(20), 1.0, 0.01, [0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95])
        assert correlation == pytest.approx(-1.0)


class TestLongTimeCorrespondence:
    """Test dephased quantum vs phase-diffused classical evolution."""

    def test_strong_dephasing_removes_phi_dependence(self, twist_params, fine_grid):
        """Test gamma t = 50 leaves an azimuthally symmetric Q matching the classical average."""
        report = long_time_correspondence(1.0, DephasingParams(50.0, twist_params), 1.0, fine_grid)
        assert report.gamma_t == pytest.approx(50.0)
        assert report.phi_dependence < 1e-8
        assert report.initial_marginal_gap < 1e-8
        assert report.classical_marginal_gap < 1e-8
        assert report.sup_gap < 1e-8

    def test_weak_dephasing_keeps_phi_dependence(self, twist_params, fine_grid):
        """Test without dephasing the evolved Q still depends on phi."""
        report = long_time_correspondence(1.0, DephasingParams(0.0, twist_params), 1.0, fine_grid)
        assert report.phi_dependence > 1e-2
