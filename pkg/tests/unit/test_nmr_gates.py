"""
Unit tests for the two-qubit NMR gate layer.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from spintop.constants import PulseKind
from spintop.exceptions import DataFormatError, DimensionMismatchError, NumericalValidationError, ValidationError
from spintop.physics.nmr_gates import (
    PAULI,
    MultiQubitState,
    PulseSequence,
    PulseTerm,
    QubitState,
    bell_pulse_sequence,
    bell_sequence,
    bell_state,
    bloch_precession,
    bloch_vector,
    coupling_unitary,
    entanglement_threshold,
    exchange_unitary,
    ghz_cascade,
    min_partial_transpose_eigenvalue,
    ppt_entangled,
    pseudo_pure,
    rotation_2x2,
    signal_decay,
    signal_decay_log10,
    single_spin_hamiltonian,
    thermal_state,
    thermal_two_spin,
    triplet_embed,
    u1,
    u2,
)
from spintop.physics.quantum_top import TopParams, energies, evolve_state
from spintop.physics.spin_core import PhasePoint, SpinQuantum, coherent_state, spin_operators


SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


class TestGates:
    """Test single-spin rotations and two-spin couplings."""

    def test_rotation_is_exponential(self):
        """Test the half-angle convention against expm."""
        axis = (0.6, 0.0, 0.8)
        generator = 0.6 * PAULI["X"] + 0.8 * PAULI["Z"]
        np.testing.assert_allclose(rotation_2x2(axis, 1.3), expm(-0.65j * generator), atol=1e-14)

    def test_rotation_rejects_non_unit_axis(self):
        with pytest.raises(ValidationError):
            u1((1.0, 1.0, 0.0), np.pi)

    def test_embedded_rotation_acts_on_target(self):
        """Test qubit 0 is the most significant factor."""
        flip = u1((1.0, 0.0, 0.0), np.pi, target=1, n=2)
        np.testing.assert_allclose(flip, np.kron(np.eye(2), -1j * PAULI["X"]), atol=1e-15)

    def test_target_out_of_range(self):
        with pytest.raises(ValidationError):
            u1((0.0, 0.0, 1.0), 1.0, target=2, n=2)

    def test_coupling_matches_exponential(self):
        """Test u2 = exp(-i (J t / 4) sigma_z sigma_z)."""
        zz = np.kron(PAULI["Z"], PAULI["Z"])
        np.testing.assert_allclose(u2(0.7, 2.0), expm(-0.25j * 0.7 * 2.0 * zz), atol=1e-14)

    def test_coupling_needs_distinct_qubits(self):
        with pytest.raises(ValidationError):
            coupling_unitary(1.0, pair=(1, 1))

    def test_exchange_gives_swap(self):
        """Test the isotropic exchange at J t = pi is SWAP up to a phase."""
        np.testing.assert_allclose(exchange_unitary(1.0, np.pi), np.exp(-1j * np.pi / 4) * SWAP, atol=1e-12)

    def test_coupling_at_half_turn_is_diagonal(self):
        """Test u2 at J t = pi is diag(e^{-i pi/4}, e^{i pi/4}, e^{i pi/4}, e^{-i pi/4})."""
        expected = np.diag(np.exp(0.25j * np.pi * np.array([-1.0, 1.0, 1.0, -1.0])))
        np.testing.assert_allclose(u2(1.0, np.pi), expected, atol=1e-15)

    @pytest.mark.parametrize("target", [0, 1])
    def test_coupling_commutes_with_z_rotations(self, target):
        gate = u2(0.8, 1.7)
        z_rotation = u1((0.0, 0.0, 1.0), 0.9, target=target, n=2)
        np.testing.assert_allclose(gate @ z_rotation, z_rotation @ gate, atol=1e-15)
        for z_single in (np.kron(PAULI["Z"], PAULI["I"]), np.kron(PAULI["I"], PAULI["Z"])):
            np.testing.assert_allclose(gate @ z_single, z_single @ gate, atol=1e-15)

    @pytest.mark.parametrize("J,t", [(1.0, 0.3), (0.6, 2.5), (-1.4, 1.1)])
    def test_exchange_singlet_phase(self, J, t):
        """Test the singlet picks up e^{3iJt/4} under the isotropic exchange."""
        singlet = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
        np.testing.assert_allclose(exchange_unitary(J, t) @ singlet, np.exp(0.75j * J * t) * singlet, atol=1e-12)


class TestPulseSequences:
    """Test pulse terms, sequences and the Bell preparation."""

    def test_bell_sequence_prepares_bell_state(self):
        """Test |00> goes to (|00> + |11>)/sqrt(2) with the global phase applied."""
        output = bell_sequence()
        np.testing.assert_allclose(output.amplitudes, bell_state().amplitudes, atol=1e-12)
        assert output.fidelity(bell_state()) == pytest.approx(1.0)

    def test_sequence_without_coupling_is_separable(self):
        """Test the sequence cannot entangle without the coupling term."""
        output = bell_sequence(include_coupling=False)
        assert not ppt_entangled(output.projector())
        assert output.fidelity(bell_state()) < 1.0 - 1e-6

    def test_bell_sequence_order(self):
        """Test the terms are listed in application order."""
        terms = bell_pulse_sequence().terms
        assert [term.kind for term in terms] == [
            PulseKind.ROT, PulseKind.ROT, PulseKind.COUPLING, PulseKind.ROT, PulseKind.ROT, PulseKind.ROT
        ]
        assert terms[0].axis == (0.0, 1.0, 0.0)
        assert terms[2].angle == pytest.approx(np.pi / 2)

    def test_sequence_json(self):
        """Test a sequence survives its JSON form."""
        sequence = bell_pulse_sequence()
        restored = PulseSequence.from_json(sequence.to_json())
        np.testing.assert_allclose(restored.unitary(), sequence.unitary(), atol=1e-15)

    def test_malformed_json_rejected(self):
        with pytest.raises(DataFormatError):
            PulseSequence.from_json("{not json")
        with pytest.raises(DataFormatError):
            PulseSequence.from_json('[{"kind": "rot", "angle": 1.0}]')

    def test_rotation_term_needs_axis(self):
        with pytest.raises(ValidationError):
            PulseTerm(PulseKind.ROT, 1.0, target=0)


class TestEntanglement:
    """Test thermal states, pseudo-pure states and the PPT test."""

    def test_bell_projector_is_entangled(self):
        projector = bell_state().projector()
        assert min_partial_transpose_eigenvalue(projector) == pytest.approx(-0.5)
        assert ppt_entangled(projector)

    def test_product_state_passes_ppt(self):
        assert not ppt_entangled(QubitState.basis(2, 1).projector())

    def test_thermal_two_spin_populations(self):
        """Test the diagonal of (1 + eps (Z1 + mu Z2)) / 4."""
        state = thermal_two_spin(0.1, 1.0)
        np.testing.assert_allclose(np.diag(state.matrix).real, [0.3, 0.25, 0.25, 0.2], atol=1e-15)
        assert not ppt_entangled(state)

    def test_thermal_two_spin_must_be_positive(self):
        with pytest.raises(NumericalValidationError):
            thermal_two_spin(0.8, 1.0)

    def test_gibbs_state_high_temperature_limit(self):
        """Test exp(-beta H)/Z approaches the linearized form at small beta."""
        beta = 1e-4
        np.testing.assert_allclose(
            thermal_state(1.0, 0.5, 0.0, beta).matrix,
            thermal_two_spin(beta / 2.0, 0.5).matrix,
            atol=1e-8,
        )

    def test_pseudo_pure_threshold(self):
        """Test the Bell pseudo-pure state becomes entangled at epsilon = 1/3."""
        assert entanglement_threshold(bell_state()) == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert not ppt_entangled(pseudo_pure(bell_state(), 0.3))
        assert ppt_entangled(pseudo_pure(bell_state(), 0.4))

    def test_threshold_of_separable_state(self):
        with pytest.raises(NumericalValidationError):
            entanglement_threshold(QubitState.basis(2))

    def test_pseudo_pure_range(self):
        with pytest.raises(ValidationError):
            pseudo_pure(bell_state(), 1.5)

    def test_register_must_be_normalized(self):
        with pytest.raises(NumericalValidationError):
            QubitState(2, np.ones(4))

    def test_density_matrix_shape(self):
        with pytest.raises(DimensionMismatchError):
            MultiQubitState(2, np.eye(2) / 2.0)

    def test_equal_bell_mixture_is_separable(self):
        """Test the equal mixture of the four Bell states is I/4 and passes PPT."""
        bells = [
            np.array([1.0, 0.0, 0.0, 1.0]),
            np.array([1.0, 0.0, 0.0, -1.0]),
            np.array([0.0, 1.0, 1.0, 0.0]),
            np.array([0.0, 1.0, -1.0, 0.0]),
        ]
        mixture = MultiQubitState(2, sum(np.outer(v, v) for v in bells) / 8.0)
        np.testing.assert_allclose(mixture.eigenvalues, np.full(4, 0.25), atol=1e-15)
        assert min_partial_transpose_eigenvalue(mixture) == pytest.approx(0.25)
        assert not ppt_entangled(mixture)

    def test_ppt_needs_two_qubits(self):
        with pytest.raises(ValidationError, match="two qubits"):
            ppt_entangled(MultiQubitState(3, np.eye(8) / 8.0))


class TestTripletEmbedding:
    """Test the s = 1 embedding into the symmetric two-qubit subspace."""

    def test_collective_operators_restrict_to_spin_one(self, spin_one):
        embedding = triplet_embed()
        ops = spin_operators(spin_one)
        collective_x = (np.kron(PAULI["X"], PAULI["I"]) + np.kron(PAULI["I"], PAULI["X"])) / 2.0
        collective_z = (np.kron(PAULI["Z"], PAULI["I"]) + np.kron(PAULI["I"], PAULI["Z"])) / 2.0
        np.testing.assert_allclose(embedding.restrict(collective_x), ops.Sx, atol=1e-15)
        np.testing.assert_allclose(embedding.restrict(collective_z), ops.Sz, atol=1e-15)

    def test_coherent_state_is_product(self, spin_one):
        """Test an s = 1 coherent state embeds as two identical qubits."""
        point = PhasePoint(1.1, 0.4)
        single = np.array([np.cos(point.theta / 2.0), np.exp(1j * point.phi) * np.sin(point.theta / 2.0)])
        embedded = triplet_embed().embed(coherent_state(spin_one, point))
        np.testing.assert_allclose(embedded.amplitudes, np.kron(single, single), atol=1e-14)

    def test_project_inverts_embed(self, spin_one):
        embedding = triplet_embed()
        psi = coherent_state(spin_one, 0.3 - 0.9j)
        np.testing.assert_allclose(embedding.project(embedding.embed(psi)).amplitudes, psi.amplitudes, atol=1e-15)

    @pytest.mark.parametrize("J,t", [(1.0, 0.4), (2.3, 1.7), (-0.8, 3.0)])
    def test_coupling_restricts_to_twisting(self, J, t):
        """Test V^+ u2 V = e^{iJt/4} exp(-i (J/2) Sz^2 t) on the triplet."""
        params = TopParams(0.0, J, SpinQuantum(2))
        embedding = triplet_embed()
        expected = np.exp(0.25j * J * t) * np.diag(np.exp(-1j * energies(params) * t))
        np.testing.assert_allclose(embedding.restrict(u2(J, t)), expected, atol=1e-14)

        psi = coherent_state(params.spin, 0.7 + 0.2j)
        gated = u2(J, t) @ embedding.embed(psi).amplitudes
        evolved = np.exp(0.25j * J * t) * evolve_state(psi, params, t).amplitudes
        np.testing.assert_allclose(embedding.project(QubitState(2, gated)).amplitudes, evolved, atol=1e-14)


class TestGhzCascade:
    """Test the Hadamard + CNOT cascade."""

    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_cascade_output(self, n):
        state = ghz_cascade(n)
        expected = np.zeros(2 ** n, dtype=complex)
        expected[0] = expected[-1] = 1.0 / np.sqrt(2.0)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("n", [1, 13])
    def test_qubit_count_bounds(self, n):
        with pytest.raises(ValidationError):
            ghz_cascade(n)


class TestBlochPrecession:
    """Test a single spin precessing in a static field."""

    def test_quarter_turn_about_z(self):
        np.testing.assert_allclose(bloch_precession((1, 0, 0), (0, 0, 1), np.pi / 2), [0.0, -1.0, 0.0], atol=1e-15)

    def test_matches_schrodinger_evolution(self):
        """Test the rotation agrees with U rho U^+ for H = -(1/2) B . sigma."""
        n0 = np.array([0.0, 0.6, 0.8])
        field = (0.3, -1.2, 0.5)
        rho0 = 0.5 * (PAULI["I"] + sum(c * PAULI[name] for c, name in zip(n0, "XYZ")))
        unitary = expm(-1j * single_spin_hamiltonian(field) * 0.9)
        expected = bloch_vector(unitary @ rho0 @ unitary.conj().T)
        np.testing.assert_allclose(bloch_precession(n0, field, 0.9), expected, atol=1e-12)

    def test_initial_vector_must_be_unit(self):
        with pytest.raises(ValidationError):
            bloch_precession((1, 1, 0), (0, 0, 1), 1.0)


class TestSignalDecay:
    """Test the (1 + 2^{2n-1})^{-g} model."""

    def test_single_qubit_value(self):
        assert signal_decay(1, 1.0) == pytest.approx(1.0 / 3.0)

    def test_underflow_safe_log(self):
        """Test large exponents stay finite in log space."""
        assert signal_decay_log10(7, 10.0) == pytest.approx(-39.134, abs=1e-3)
        assert signal_decay(7, 10.0) == pytest.approx(7.338e-40, rel=1e-3)
        assert np.isfinite(signal_decay_log10(400, 1e3))

    def test_zero_gates_keep_signal(self):
        assert signal_decay(5, 0.0) == 1.0

    @pytest.mark.parametrize("n,g", [(0, 1.0), (2, -1.0), (1.5, 1.0)])
    def test_invalid_arguments(self, n, g):
        with pytest.raises(ValidationError):
            signal_decay(n, g)
