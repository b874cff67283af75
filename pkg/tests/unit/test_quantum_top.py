"""
Unit tests for the exact quantum dynamics of the top.
"""

import numpy as np
import pytest

from spintop.exceptions import DimensionMismatchError, ValidationError
from spintop.physics.quantum_top import (
    TopParams,
    apply_generator,
    cat_state,
    cat_time,
    evolve_state,
    evolve_unitary,
    expectation_sminus,
    fidelity,
    generator_coefficients,
    qdot_quantum,
    qdot_quantum_grid,
    revival_time,
    state_fidelity,
)
from spintop.physics.spin_core import PhasePoint, SpinQuantum, coherent_state, q_coherent

from tests.fixtures import create_coherent_projector, create_test_density_matrix


class TestTopParams:
    """Test parameter validation."""

    def test_non_finite_rejected(self, spin_one):
        """Test NaN and infinite rates are rejected."""
        with pytest.raises(ValidationError):
            TopParams(np.nan, 1.0, spin_one)
        with pytest.raises(ValidationError):
            TopParams(0.0, np.inf, spin_one)


class TestUnitaryEvolution:
    """Test evolution under H = omega Sz + (J/2s) Sz^2."""

    def test_preserves_trace_and_purity(self, rng):
        """Test the evolved state stays a valid state with unchanged purity."""
        spin = SpinQuantum(5)
        rho = create_test_density_matrix(spin, rng)
        evolved = evolve_unitary(rho, TopParams(0.4, 1.3, spin), 2.7)
        assert np.trace(evolved.matrix).real == pytest.approx(1.0)
        assert evolved.purity == pytest.approx(rho.purity)
        np.testing.assert_allclose(np.diag(evolved.matrix), np.diag(rho.matrix), atol=1e-14)

    @pytest.mark.parametrize("t1,t2", [(0.4, 1.1), (2.5, -0.7), (-3.0, -1.2)])
    def test_group_law(self, rng, t1, t2):
        """Test U(t2) U(t1) = U(t1 + t2) on states and density matrices."""
        spin = SpinQuantum(4)
        params = TopParams(0.3, 1.7, spin)
        rho = create_test_density_matrix(spin, rng)
        np.testing.assert_allclose(
            evolve_unitary(evolve_unitary(rho, params, t1), params, t2).matrix,
            evolve_unitary(rho, params, t1 + t2).matrix,
            atol=1e-13,
        )
        psi = coherent_state(spin, 0.2 - 0.9j)
        np.testing.assert_allclose(
            evolve_state(evolve_state(psi, params, t1), params, t2).amplitudes,
            evolve_state(psi, params, t1 + t2).amplitudes,
            atol=1e-13,
        )

    def test_spin_mismatch(self, spin_one):
        """Test a state of another spin is rejected."""
        rho = create_coherent_projector(SpinQuantum(3))
        with pytest.raises(DimensionMismatchError):
            evolve_unitary(rho, TopParams(0.0, 1.0, spin_one), 1.0)

    @pytest.mark.parametrize("two_s", [1, 2, 3, 4, 7])
    def test_revival(self, two_s):
        """Test every state returns at t = 4 pi s / J when omega = 0."""
        spin = SpinQuantum(two_s)
        params = TopParams(0.0, 0.8, spin)
        psi = coherent_state(spin, 0.6 + 0.3j)
        assert fidelity(evolve_state(psi, params, revival_time(params)), psi) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("two_s", [2, 4, 6])
    def test_cat_state_at_half_revival(self, two_s):
        """Test |z0 = 1> becomes the two-branch cat state at t = pi s / J."""
        spin = SpinQuantum(two_s)
        params = TopParams(0.0, 1.0, spin)
        rho = evolve_unitary(create_coherent_projector(spin, 1.0), params, cat_time(params))
        assert state_fidelity(rho, cat_state(1.0, spin)) == pytest.approx(1.0, abs=1e-12)

    def test_cat_state_requires_integer_spin(self):
        """Test half-integer spins have no cat state."""
        with pytest.raises(ValidationError):
            cat_state(1.0, SpinQuantum(3))

    def test_cat_state_rejects_poles(self, spin_one):
        """Test |z0> and |-z0> coincide at the north pole."""
        with pytest.raises(ValidationError):
            cat_state(0.0, spin_one)

    def test_times_undefined_without_twist(self, spin_one):
        """Test cat and revival times need J != 0."""
        params = TopParams(1.0, 0.0, spin_one)
        with pytest.raises(ValidationError):
            cat_time(params)
        with pytest.raises(ValidationError):
            revival_time(params)

    @pytest.mark.parametrize("two_s,omega,t", [(2, 0.0, 0.9), (2, 0.3, 0.7), (3, -0.5, 1.9), (10, 0.2, 3.1)])
    def test_sminus_closed_form(self, two_s, omega, t):
        """Test <S->(t) = s e^{-i omega t} cos^{2s-1}(J t / 2s) for z0 = 1."""
        spin = SpinQuantum(two_s)
        J = 1.0
        params = TopParams(omega, J, spin)
        expected = spin.s * np.exp(-1j * omega * t) * np.cos(J * t / two_s) ** (two_s - 1)
        actual = expectation_sminus(create_coherent_projector(spin, 1.0), params, t)
        assert actual == pytest.approx(expected, abs=1e-12)


class TestGenerator:
    """Test the extracted Q-function generator against the commutator."""

    @pytest.mark.parametrize("two_s", [1, 2, 5])
    @pytest.mark.parametrize("point", [0.4 - 0.3j, 1.2 + 0.5j, -0.2 + 0.1j])
    def test_generator_matches_commutator(self, two_s, point):
        """Test drift and diffusion reproduce dQ/dt for a coherent state."""
        spin = SpinQuantum(two_s)
        params = TopParams(0.35, 1.1, spin)
        z0 = 0.7 + 0.2j
        rho = create_coherent_projector(spin, z0)

        def q(z):
            return q_coherent(spin, z, z0)

        expected = qdot_quantum(rho, params, point)
        assert apply_generator(q, point, params) == pytest.approx(expected, abs=1e-5)

    def test_diffusion_is_indefinite(self, twist_params):
        """Test det D = -|kappa|^2 / 4 < 0 away from the origin."""
        coefficients = generator_coefficients(0.5 + 0.5j, twist_params)
        kappa = 1j * twist_params.J / twist_params.spin.two_s * (0.5 + 0.5j) ** 2
        assert np.linalg.det(coefficients.diffusion) == pytest.approx(-abs(kappa) ** 2 / 4)
        assert np.linalg.det(coefficients.diffusion) < 0

    @pytest.mark.parametrize("two_s", [1, 2, 9])
    def test_diffusion_is_indefinite_everywhere(self, two_s):
        """Test det D < 0 on a dense sample of 0.2 <= |z| <= 5, equal to -(J |z|^2 / 4s)^2."""
        spin = SpinQuantum(two_s)
        params = TopParams(0.4, 1.3, spin)
        for r in np.linspace(0.2, 5.0, 49):
            for phi in np.linspace(0.0, 2 * np.pi, 24, endpoint=False):
                z = r * np.exp(1j * phi)
                det = np.linalg.det(generator_coefficients(z, params).diffusion)
                assert det < 0
                assert det == pytest.approx(-(params.J * r ** 2 / (4 * spin.s)) ** 2, rel=1e-9)

    def test_drift_formula(self, spin_one):
        """Test drift = i (omega + J (1-r)/(1+r) - J/2s)."""
        params = TopParams(0.2, 1.5, spin_one)
        z = 0.3 + 0.4j
        r = abs(z) ** 2
        expected = 1j * (0.2 + 1.5 * (1 - r) / (1 + r) - 1.5 / 2.0)
        assert generator_coefficients(z, params).drift == pytest.approx(expected)

    def test_south_pole_rejected(self, twist_params):
        """Test the chart has no south pole."""
        with pytest.raises(ValidationError):
            generator_coefficients(PhasePoint(np.pi, 0.0), twist_params)

    def test_grid_qdot_matches_pointwise(self, twist_params, exact_grid):
        """Test the vectorized commutator agrees with the scalar one."""
        rho = create_coherent_projector(twist_params.spin, 0.5 + 0.5j)
        theta, phi = exact_grid.mesh()
        values = qdot_quantum_grid(rho, twist_params, theta, phi)
        assert values[1, 2] == pytest.approx(qdot_quantum(rho, twist_params, PhasePoint(theta[1, 2], phi[1, 2])))
