"""
Unit tests for classical transport and the quantum/classical comparisons.
"""

import numpy as np
import pytest

from spintop.exceptions import NumericalValidationError, ValidationError
from spintop.physics.classical_top import (
    classical_generator_coefficients,
    coherent_distribution,
    evolve_classical,
    flow,
    qdot_classical,
    qdot_classical_grid,
    short_time_study,
    sminus_gap,
)
from spintop.physics.quantum_top import TopParams, evolve_unitary, qdot_quantum_grid
from spintop.physics.spin_core import PhasePoint, SpinQuantum, make_grid, sample_q_coherent, sample_q_function

from tests.fixtures import create_coherent_projector, create_test_grid


class TestFlow:
    """Test the classical characteristics."""

    def test_theta_conserved_and_phi_sheared(self):
        """Test phi(t) = phi0 + (omega + J cos theta0) t."""
        params = TopParams(0.3, 1.2, SpinQuantum(2))
        point = PhasePoint(1.0, 0.5)
        result = flow(point, params, 0.8)
        assert result.theta_t == pytest.approx(1.0)
        expected_phi = np.mod(0.5 + (0.3 + 1.2 * np.cos(1.0)) * 0.8, 2 * np.pi)
        assert result.phi_t == pytest.approx(expected_phi)

    def test_poles_are_fixed(self, twist_params):
        """Test both poles are stationary."""
        assert flow(0.0, twist_params, 3.0).theta_t == 0.0
        south = flow(PhasePoint(np.pi, 0.0), twist_params, 3.0)
        assert south.point.is_south_pole

    def test_liouville_coefficients(self, twist_params):
        """Test the classical generator has no diffusion."""
        coefficients = classical_generator_coefficients(0.5 + 0.1j, twist_params)
        np.testing.assert_array_equal(coefficients.diffusion, np.zeros((2, 2)))


class TestEvolveClassical:
    """Test Liouville transport of distributions."""

    def test_time_zero_is_identity(self, twist_params, fine_grid):
        """Test t = 0 returns the initial distribution."""
        q0 = coherent_distribution(twist_params.spin, 0.5 + 0.5j)
        result = evolve_classical(q0, twist_params, 0.0, fine_grid)
        np.testing.assert_allclose(result.values, sample_q_coherent(fine_grid, 0.5 + 0.5j).values, atol=1e-15)

    def test_theta_marginal_conserved(self, twist_params, fine_grid):
        """Test transport only moves probability along rings."""
        q0 = coherent_distribution(twist_params.spin, 1.0)
        initial = evolve_classical(q0, twist_params, 0.0, fine_grid)
        later = evolve_classical(q0, twist_params, 5.0, fine_grid)
        np.testing.assert_allclose(later.theta_marginal(), initial.theta_marginal(), atol=1e-12)
        assert later.total() == pytest.approx(1.0, abs=1e-12)

    def test_unnormalized_input_rejected(self, twist_params, fine_grid):
        """Test input must integrate to 1."""
        q0 = coherent_distribution(twist_params.spin, 1.0)
        with pytest.raises(NumericalValidationError):
            evolve_classical(lambda theta, phi: 2.0 * q0(theta, phi), twist_params, 1.0, fine_grid)

    def test_functional_input_needs_grid(self, twist_params):
        """Test a callable without an output grid is rejected."""
        with pytest.raises(ValidationError):
            evolve_classical(coherent_distribution(twist_params.spin, 1.0), twist_params, 1.0)

    def test_sampled_input_is_interpolated(self, twist_params, fine_grid):
        """Test transporting grid data stays close to exact transport."""
        q0 = coherent_distribution(twist_params.spin, 1.0)
        exact = evolve_classical(q0, twist_params, 1.0, fine_grid)
        sampled = evolve_classical(sample_q_coherent(fine_grid, 1.0), twist_params, 1.0)
        assert np.max(np.abs(sampled.values - exact.values)) < 1e-2


class TestQuantumClassicalComparison:
    """Test the short-time and semiclassical comparisons."""

    def test_short_time_orders(self, twist_params, fine_grid):
        """Test the Q gap is first order in t while the moment gap is second order."""
        study = short_time_study(twist_params, 1.0, [0.02, 0.04, 0.08, 0.16], fine_grid)
        assert 0.8 <= study.sup_slope <= 1.2
        assert study.moment_slope >= 1.9

    def test_initial_rates_differ_by_diffusion(self, twist_params, fine_grid):
        """Test the l1 gap at short times follows the difference of the rates."""
        t = 0.01
        spin = twist_params.spin
        rho0 = create_coherent_projector(spin, 1.0)
        q0 = coherent_distribution(spin, 1.0)
        theta, phi = fine_grid.mesh()
        rate_gap = np.abs(qdot_quantum_grid(rho0, twist_params, theta, phi) - qdot_classical_grid(q0, twist_params, theta, phi))
        predicted = t * float(np.sum(fine_grid.weights * rate_gap))

        quantum = sample_q_function(evolve_unitary(rho0, twist_params, t), fine_grid)
        classical = evolve_classical(q0, twist_params, t, fine_grid)
        l1 = float(np.sum(fine_grid.weights * np.abs(quantum.values - classical.values)))
        assert l1 == pytest.approx(predicted, rel=0.1)

    def test_semiclassical_gap_shrinks_with_spin(self):
        """Test the normalized <S-> gap at J t = 0.5 decreases as s grows."""
        gaps = []
        for two_s in (2, 4, 8, 16, 32):
            spin = SpinQuantum(two_s)
            grid = create_test_grid(spin)
            gaps.append(sminus_gap(TopParams(0.0, 1.0, spin), 1.0, 0.5, grid))
        assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.07


class TestClassicalRate:
    """Test dQ/dt at t = 0 under the Liouville flow."""

    def test_uniform_distribution_is_stationary(self, twist_params):
        """Test a uniform Q0 has zero rate everywhere."""
        spin = twist_params.spin

        def uniform(theta, phi):
            return np.full(np.broadcast(theta, phi).shape, 1.0 / spin.dim)

        for point in (0.0, 0.3 + 0.4j, -2.0j, PhasePoint(2.5, 4.0)):
            assert qdot_classical(uniform, twist_params, point) == 0.0

    @pytest.mark.parametrize("omega,J", [(0.0, 0.0), (0.7, 1.3), (-2.0, 0.4)])
    def test_azimuthally_symmetric_distribution_is_stationary(self, spin_one, omega, J):
        """Test a phi-independent Q0 is invariant under any rotation about z."""
        params = TopParams(omega, J, spin_one)
        q0 = coherent_distribution(spin_one, 0.0)
        for point in (0.5j, 1.0, PhasePoint(2.0, 1.0)):
            assert qdot_classical(q0, params, point) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("omega,target", [(0.0, 1j), (0.3, 0.5 + 0.5j)])
    def test_matches_transport_difference_quotient(self, spin_one, omega, target):
        """Test the rate against a central difference of evolve_classical at a grid node."""
        params = TopParams(omega, 1.0, spin_one)
        q0 = coherent_distribution(spin_one, 1.0)
        grid = make_grid(spin_one, 65, 128)
        target_point = PhasePoint.from_z(target)
        i = int(np.argmin(np.abs(grid.thetas - target_point.theta)))
        j = int(np.argmin(np.abs(grid.phis - target_point.phi)))
        dt = 1e-4
        forward = evolve_classical(q0, params, dt, grid).values[i, j]
        backward = evolve_classical(q0, params, -dt, grid).values[i, j]
        rate = qdot_classical(q0, params, PhasePoint(grid.thetas[i], grid.phis[j]))
        assert rate == pytest.approx((forward - backward) / (2 * dt), abs=1e-7)

    def test_equatorial_rate_vanishes_without_rotation(self, twist_params):
        """Test the equator does not move when omega = 0, so dQ/dt = 0 at z = i."""
        q0 = coherent_distribution(twist_params.spin, 1.0)
        assert qdot_classical(q0, twist_params, 1j) == pytest.approx(0.0, abs=1e-9)
