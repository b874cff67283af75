"""
Two-qubit NMR gate layer.

Qubit 0 is the most significant factor of every tensor product, and
|0> = (1, 0) with sigma_z |0> = +|0>. Under this ordering the symmetric
two-qubit states map onto the s = 1 Dicke basis with |1,1> at |00>.

Rotations use the half-angle convention exp(-i (angle/2) axis . sigma) and
the sigma_z sigma_z coupling term is exp(-i (angle/2) sigma_z sigma_z), so the
free evolution under (J/4) sigma_z sigma_z for time t is a coupling of angle
J t / 2.
"""

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq
from scipy.spatial.transform import Rotation

from spintop.constants import QUBIT_LIMITS, TOLERANCES, PulseKind
from spintop.exceptions import DataFormatError, DimensionMismatchError, NumericalValidationError, ValidationError
from spintop.physics.spin_core import PureState, SpinQuantum, validate_density_matrix
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}

BELL_GLOBAL_PHASE = -np.pi / 4


def _unit_axis(axis: Sequence[float]) -> np.ndarray:
    vector = np.asarray(axis, dtype=float)
    if vector.shape != (3,) or abs(np.linalg.norm(vector) - 1.0) > TOLERANCES.UNIT_VECTOR:
        raise ValidationError(f"Axis must be a unit 3-vector, got {list(vector)}", field="axis")
    return vector


def _check_qubit_count(n: int) -> None:
    if not QUBIT_LIMITS.MIN_QUBITS <= n <= QUBIT_LIMITS.MAX_QUBITS:
        raise ValidationError(
            f"Qubit count must lie in [{QUBIT_LIMITS.MIN_QUBITS}, {QUBIT_LIMITS.MAX_QUBITS}], got {n}",
            field="n"
        )


def _check_target(target: int, n: int) -> None:
    if not 0 <= target < n:
        raise ValidationError(f"Qubit index {target} out of range for {n} qubits", field="target")


# ============================================================================
# States
# ============================================================================


@dataclass(frozen=True, eq=False)
class QubitState:
    """
    Pure state of an n-qubit register.

    Attributes:
        n: Number of qubits
        amplitudes: 2^n complex amplitudes, qubit 0 most significant
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.shape != (2 ** self.n,):
            raise DimensionMismatchError(2 ** self.n, amplitudes.size, "amplitudes")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > TOLERANCES.CLOSED_FORM:
            raise NumericalValidationError(
                f"Register state is not normalized (norm={norm!r})",
                check="normalization"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "QubitState":
        vector = np.zeros(2 ** n, dtype=complex)
        vector[index] = 1.0
        return cls(n, vector)

    def projector(self) -> "MultiQubitState":
        return MultiQubitState(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))

    def fidelity(self, other: "QubitState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


@dataclass(frozen=True, eq=False)
class MultiQubitState:
    """
    Density matrix of an n-qubit register.

    Attributes:
        n: Number of qubits
        matrix: 2^n x 2^n Hermitian, unit-trace, positive matrix
    """

    n: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(dim, matrix.shape[0] if matrix.ndim else 0, "density matrix")
        validate_density_matrix(matrix)
        matrix = np.array(matrix, copy=True)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


# ============================================================================
# Gates
# ============================================================================


def embed(gate: np.ndarray, target: int, n: int) -> np.ndarray:
    """Single-qubit gate acting on `target`, identity elsewhere."""
    _check_target(target, n)
    factors = [gate if index == target else PAULI["I"] for index in range(n)]
    result = factors[0]
    for factor in factors[1:]:
        result = np.kron(result, factor)
    return result


def rotation_2x2(axis: Sequence[float], angle: float) -> np.ndarray:
    """exp(-i (angle/2) axis . sigma) = cos(angle/2) I - i sin(angle/2) axis . sigma."""
    nx, ny, nz = _unit_axis(axis)
    generator = nx * PAULI["X"] + ny * PAULI["Y"] + nz * PAULI["Z"]
    return np.cos(angle / 2.0) * PAULI["I"] - 1j * np.sin(angle / 2.0) * generator


def u1(axis: Sequence[float], angle: float, target: int = 0, n: int = 1) -> np.ndarray:
    """
    Single-spin rotation exp(-i (angle/2) axis . sigma) on `target`.

    Raises:
        ValidationError: If the axis is not unit-norm or target is out of range
    """
    return embed(rotation_2x2(axis, angle), target, n)


def _parities(pair: Tuple[int, int], n: int) -> np.ndarray:
    """Eigenvalues of sigma_z^(i) sigma_z^(j) over the computational basis."""
    indices = np.arange(2 ** n)
    bit_i = (indices >> (n - 1 - pair[0])) & 1
    bit_j = (indices >> (n - 1 - pair[1])) & 1
    return np.where(bit_i == bit_j, 1.0, -1.0)


def coupling_unitary(angle: float, pair: Tuple[int, int] = (0, 1), n: int = 2) -> np.ndarray:
    """exp(-i (angle/2) sigma_z^(i) sigma_z^(j)), diagonal in the computational basis."""
    for index in pair:
        _check_target(index, n)
    if pair[0] == pair[1]:
        raise ValidationError("Coupling needs two distinct qubits", field="pair")
    return np.diag(np.exp(-0.5j * angle * _parities(pair, n)))


def u2(J: float, t: float) -> np.ndarray:
    """exp(-i (J/4) t sigma_z sigma_z) on two qubits."""
    return coupling_unitary(J * t / 2.0)


def exchange_unitary(J: float, t: float) -> np.ndarray:
    """
    exp(-i H t) for H = (J/4) sigma . sigma.

    Triplet states pick up e^{-iJt/4}, the singlet e^{3iJt/4}; at J t = pi the
    result is SWAP up to the phase e^{-i pi/4}.
    """
    h = J / 4.0 * sum(np.kron(PAULI[name], PAULI[name]) for name in ("X", "Y", "Z"))
    return expm(-1j * h * t)


# ============================================================================
# Pulse sequences
# ============================================================================


@dataclass(frozen=True)
class PulseTerm:
    """
    One factor of a pulse sequence.

    A ROT term carries a unit axis and a target qubit; a COUPLING term
    carries the qubit pair.
    """

    kind: PulseKind
    angle: float
    axis: Optional[Tuple[float, float, float]] = None
    target: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None

    def __post_init__(self) -> None:
        kind = PulseKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "angle", float(self.angle))
        if kind == PulseKind.ROT:
            if self.axis is None or self.target is None:
                raise ValidationError("Rotation terms need an axis and a target", field="axis")
            object.__setattr__(self, "axis", tuple(float(v) for v in _unit_axis(self.axis)))
        elif self.pair is None or len(self.pair) != 2:
            raise ValidationError("Coupling terms need a qubit pair", field="pair")
        else:
            object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))

    @classmethod
    def rot(cls, axis: Union[str, Sequence[float]], angle: float, target: int) -> "PulseTerm":
        return cls(PulseKind.ROT, angle, axis=AXES[axis] if isinstance(axis, str) else tuple(axis), target=target)

    @classmethod
    def coupling(cls, angle: float, pair: Tuple[int, int] = (0, 1)) -> "PulseTerm":
        return cls(PulseKind.COUPLING, angle, pair=pair)

    def unitary(self, n: int) -> np.ndarray:
        if self.kind == PulseKind.ROT:
            return u1(self.axis, self.angle, self.target, n)
        return coupling_unitary(self.angle, self.pair, n)

    def to_dict(self) -> dict:
        if self.kind == PulseKind.ROT:
            return {"kind": self.kind.value, "axis": list(self.axis), "angle": self.angle, "target": self.target}
        return {"kind": self.kind.value, "pair": list(self.pair), "angle": self.angle}

    @classmethod
    def from_dict(cls, data: dict) -> "PulseTerm":
        try:
            kind = PulseKind(data["kind"])
            if kind == PulseKind.ROT:
                return cls(kind, data["angle"], axis=tuple(data["axis"]), target=int(data["target"]))
            return cls(kind, data["angle"], pair=tuple(data["pair"]))
        except (KeyError, TypeError, ValueError) as e:
            raise DataFormatError(f"Malformed pulse term {data!r}: {e}")


@dataclass(frozen=True)
class PulseSequence:
    """
    Ordered pulse terms; the first term is applied first.

    Serialized as a JSON list of term objects.
    """

    n_qubits: int
    terms: Tuple[PulseTerm, ...]

    def __post_init__(self) -> None:
        _check_qubit_count(self.n_qubits)
        object.__setattr__(self, "terms", tuple(self.terms))

    def unitary(self) -> np.ndarray:
        result = np.eye(2 ** self.n_qubits, dtype=complex)
        for term in self.terms:
            result = term.unitary(self.n_qubits) @ result
        return result

    def to_json(self) -> str:
        return json.dumps([term.to_dict() for term in self.terms])

    @classmethod
    def from_json(cls, text: str, n_qubits: int = 2) -> "PulseSequence":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DataFormatError(f"Pulse sequence is not valid JSON: {e}")
        if not isinstance(data, list):
            raise DataFormatError("Pulse sequence JSON must be a list of terms")
        return cls(n_qubits, tuple(PulseTerm.from_dict(item) for item in data))


def apply_sequence(sequence: PulseSequence, state: QubitState, global_phase: float = 0.0) -> QubitState:
    if state.n != sequence.n_qubits:
        raise DimensionMismatchError(sequence.n_qubits, state.n, "register")
    amplitudes = np.exp(1j * global_phase) * (sequence.unitary() @ state.amplitudes)
    return QubitState(state.n, amplitudes)


def bell_pulse_sequence(include_coupling: bool = True) -> PulseSequence:
    """
    Pulse sequence taking |00> to (|00> + |11>)/sqrt(2) up to e^{i pi/4}.

    Application order: y(pi/2) on qubit 0, y(-pi/2) on qubit 1, the
    sigma_z sigma_z coupling for J t = pi, y(pi/2) on qubit 1, z(-pi/2) on
    qubit 0, x(-pi/2) on qubit 1.
    """
    terms: List[PulseTerm] = [
        PulseTerm.rot("y", np.pi / 2, 0),
        PulseTerm.rot("y", -np.pi / 2, 1),
    ]
    if include_coupling:
        terms.append(PulseTerm.coupling(np.pi / 2))
    terms += [
        PulseTerm.rot("y", np.pi / 2, 1),
        PulseTerm.rot("z", -np.pi / 2, 0),
        PulseTerm.rot("x", -np.pi / 2, 1),
    ]
    return PulseSequence(2, tuple(terms))


def bell_state() -> QubitState:
    return QubitState(2, np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0))


def bell_sequence(include_coupling: bool = True) -> QubitState:
    """Run the Bell pulse sequence on |00>, including the global phase."""
    return apply_sequence(bell_pulse_sequence(include_coupling), QubitState.basis(2), BELL_GLOBAL_PHASE)


# ============================================================================
# Thermal and pseudo-pure states
# ============================================================================


def thermal_two_spin(epsilon: float, mu: float) -> MultiQubitState:
    """
    High-temperature two-spin state (1 + epsilon (sigma_z^(1) + mu sigma_z^(2))) / 4.

    Raises:
        NumericalValidationError: If epsilon and mu give a negative population
    """
    z1 = np.kron(PAULI["Z"], PAULI["I"])
    z2 = np.kron(PAULI["I"], PAULI["Z"])
    return MultiQubitState(2, (np.eye(4) + epsilon * (z1 + mu * z2)) / 4.0)


def thermal_state(omega1: float, omega2: float, J: float, beta: float) -> MultiQubitState:
    """
    Gibbs state exp(-beta H) / Z for the Zeeman + coupling Hamiltonian
        H = -(omega1/2) sigma_z^(1) - (omega2/2) sigma_z^(2) + (J/4) sigma_z^(1) sigma_z^(2).

    To first order in beta this is thermal_two_spin with
    epsilon = beta omega1 / 2 and mu = omega2 / omega1.
    """
    z1 = np.kron(PAULI["Z"], PAULI["I"])
    z2 = np.kron(PAULI["I"], PAULI["Z"])
    h = -0.5 * omega1 * z1 - 0.5 * omega2 * z2 + 0.25 * J * z1 @ z2
    weights = expm(-beta * h)
    return MultiQubitState(2, weights / np.trace(weights))


def pseudo_pure(psi: QubitState, epsilon: float) -> MultiQubitState:
    """((1 - epsilon) / 2^n) 1 + epsilon |psi><psi|."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValidationError(f"epsilon must lie in [0, 1], got {epsilon}", field="epsilon")
    dim = 2 ** psi.n
    matrix = (1.0 - epsilon) / dim * np.eye(dim) + epsilon * np.outer(psi.amplitudes, psi.amplitudes.conj())
    return MultiQubitState(psi.n, matrix)


# ============================================================================
# Entanglement
# ============================================================================


def partial_transpose(matrix: np.ndarray) -> np.ndarray:
    """Partial transpose of a two-qubit matrix on the second qubit."""
    return np.asarray(matrix).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def min_partial_transpose_eigenvalue(state: MultiQubitState) -> float:
    if state.n != 2:
        raise ValidationError("The PPT test is implemented for two qubits", field="n")
    return float(np.linalg.eigvalsh(partial_transpose(state.matrix))[0])


def ppt_entangled(state: MultiQubitState) -> bool:
    """True iff the partial transpose has a negative eigenvalue; exact for two qubits."""
    return min_partial_transpose_eigenvalue(state) < TOLERANCES.EIGENVALUE_FLOOR


def entanglement_threshold(psi: QubitState, xtol: float = 1e-12) -> float:
    """
    Smallest epsilon at which pseudo_pure(psi, epsilon) becomes entangled.

    Raises:
        NumericalValidationError: If psi itself passes the PPT test
    """
    def margin(epsilon: float) -> float:
        return min_partial_transpose_eigenvalue(pseudo_pure(psi, epsilon))

    if margin(1.0) >= 0.0:
        raise NumericalValidationError("State is separable; no entanglement threshold", check="ppt")
    threshold = brentq(margin, 0.0, 1.0, xtol=xtol)
    logger.debug("Entanglement threshold bracketed", extra={"epsilon": threshold})
    return float(threshold)


# ============================================================================
# Triplet embedding
# ============================================================================


@dataclass(frozen=True, eq=False)
class TripletEmbedding:
    """
    Isometry from the s = 1 Dicke basis into two qubits.

    Columns are |00>, (|01> + |10>)/sqrt(2) and |11>, the images of
    |1,1>, |1,0> and |1,-1>.
    """

    isometry: np.ndarray

    def restrict(self, operator: np.ndarray) -> np.ndarray:
        """V^+ O V."""
        return self.isometry.conj().T @ operator @ self.isometry

    def embed(self, psi: PureState) -> QubitState:
        if psi.spin.two_s != 2:
            raise DimensionMismatchError(3, psi.spin.dim, "triplet state")
        return QubitState(2, self.isometry @ psi.amplitudes)

    def project(self, state: QubitState) -> PureState:
        return PureState(SpinQuantum(2), self.isometry.conj().T @ state.amplitudes)


def triplet_embed() -> TripletEmbedding:
    isometry = np.zeros((4, 3), dtype=complex)
    isometry[0, 0] = 1.0
    isometry[1, 1] = isometry[2, 1] = 1.0 / np.sqrt(2.0)
    isometry[3, 2] = 1.0
    return TripletEmbedding(isometry)


# ============================================================================
# GHZ cascade
# ============================================================================


def _apply_single(tensor: np.ndarray, gate: np.ndarray, target: int) -> np.ndarray:
    tensor = np.tensordot(gate, tensor, axes=([1], [target]))
    return np.moveaxis(tensor, 0, target)


def _apply_cnot(tensor: np.ndarray, control: int, target: int) -> np.ndarray:
    tensor = np.array(tensor, copy=True)
    selector = [slice(None)] * tensor.ndim
    selector[control] = 1
    # target axis index shifts down once the control axis is fixed
    flipped_axis = target if target < control else target - 1
    tensor[tuple(selector)] = np.flip(tensor[tuple(selector)], axis=flipped_axis)
    return tensor


def ghz_cascade(n: int) -> QubitState:
    """
    Hadamard on qubit 0 followed by CNOT(k -> k+1) for k = 0..n-2,
    giving (|0...0> + |1...1>)/sqrt(2).
    """
    _check_qubit_count(n)
    hadamard = (PAULI["X"] + PAULI["Z"]) / np.sqrt(2.0)
    tensor = QubitState.basis(n).amplitudes.reshape((2,) * n)
    tensor = _apply_single(tensor, hadamard, 0)
    for control in range(n - 1):
        tensor = _apply_cnot(tensor, control, control + 1)
    return QubitState(n, tensor.reshape(-1))


# ============================================================================
# Single spin in a field
# ============================================================================


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """(<sigma_x>, <sigma_y>, <sigma_z>) of a single-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionMismatchError(2, rho.shape[0] if rho.ndim else 0, "single-qubit state")
    return np.array([np.real(np.trace(rho @ PAULI[name])) for name in ("X", "Y", "Z")])


def single_spin_hamiltonian(B: Sequence[float]) -> np.ndarray:
    """H = -(1/2) B . sigma, whose Bloch dynamics is dn/dt = -B x n."""
    bx, by, bz = np.asarray(B, dtype=float)
    return -0.5 * (bx * PAULI["X"] + by * PAULI["Y"] + bz * PAULI["Z"])


def bloch_precession(n0: Sequence[float], B: Sequence[float], t: float) -> np.ndarray:
    """
    Solution of dn/dt = -B x n: rotation of n0 by -|B| t about B.

    Raises:
        ValidationError: If n0 is not a unit vector
    """
    n0 = _unit_axis(n0)
    return Rotation.from_rotvec(-np.asarray(B, dtype=float) * t).apply(n0)


# ============================================================================
# Signal decay model
# ============================================================================


def signal_decay_log(n: int, g: float) -> float:
    """Natural log of (1 + 2^{2n-1})^{-g}."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}", field="n")
    if not np.isfinite(g) or g < 0:
        raise ValidationError(f"g must be >= 0, got {g}", field="g")
    return float(-g * np.log1p(2.0 ** (2 * int(n) - 1)))


def signal_decay_log10(n: int, g: float) -> float:
    return signal_decay_log(n, g) / np.log(10.0)


def signal_decay(n: int, g: float) -> float:
    """(1 + 2^{2n-1})^{-g}, evaluated through its logarithm."""
    return float(np.exp(signal_decay_log(n, g)))
