"""
Spin-s Hilbert space machinery.

Basis convention: index k = 0..2s labels the Dicke state |s, s-k>, so
index 0 is the north pole |s, s> and index 2s is |s, -s>. Sz is therefore
diag(s, s-1, ..., -s). Every state, operator and amplitude array in the
package uses this ordering.

Phase-space points carry the polar chart (theta, phi) as ground truth; the
stereographic label z = e^{i phi} tan(theta/2) is a derived view, which keeps
the south pole representable.

The Q-function integrals use the measure
    d mu = (2s+1)/(4 pi) sin(theta) d theta d phi,
realized by a Gauss-Legendre rule in cos(theta) times a uniform rule in phi.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln, roots_legendre, xlogy

from spintop.constants import SPIN_LIMITS, TOLERANCES
from spintop.exceptions import (
    DimensionMismatchError,
    GridResolutionError,
    NumericalValidationError,
    ValidationError,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

TWO_PI = 2.0 * np.pi


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


# ============================================================================
# Domain types
# ============================================================================


@dataclass(frozen=True)
class SpinQuantum:
    """
    Spin quantum number, stored as the integer 2s.

    Attributes:
        two_s: Twice the spin quantum number (positive integer)
    """

    two_s: int

    def __post_init__(self) -> None:
        if isinstance(self.two_s, bool) or not isinstance(self.two_s, (int, np.integer)):
            raise ValidationError(f"2s must be an integer, got {self.two_s!r}", field="s")
        if self.two_s < SPIN_LIMITS.MIN_TWO_S:
            raise ValidationError(f"2s must be a positive integer, got {self.two_s}", field="s")
        object.__setattr__(self, "two_s", int(self.two_s))

    @classmethod
    def parse(cls, value: Union[str, float, int, Fraction]) -> "SpinQuantum":
        """
        Build from a spin value such as 1, 0.5, "1/2" or "3/2".

        Raises:
            ValidationError: If 2s is not a positive integer
        """
        try:
            spin = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError):
            raise ValidationError(f"Cannot parse spin value {value!r}", field="s")
        doubled = 2 * spin
        if doubled.denominator != 1:
            raise ValidationError(f"s must be a half-integer, got {value!r}", field="s")
        return cls(int(doubled))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def is_integer(self) -> bool:
        return self.two_s % 2 == 0

    @property
    def m_values(self) -> np.ndarray:
        """Sz eigenvalues in basis order: s, s-1, ..., -s."""
        return self.s - np.arange(self.dim, dtype=float)

    def label(self) -> str:
        return str(self.two_s // 2) if self.is_integer else f"{self.two_s}/2"

    def __str__(self) -> str:
        return f"s={self.label()}"


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Normalized state vector of the top.

    Attributes:
        spin: Spin quantum number
        amplitudes: Complex amplitudes in |s,s>..|s,-s> order
    """

    spin: SpinQuantum
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.spin.dim,):
            raise DimensionMismatchError(self.spin.dim, amplitudes.size, "amplitudes")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > TOLERANCES.CLOSED_FORM:
            raise NumericalValidationError(
                f"State is not normalized (norm={norm!r})",
                check="normalization",
                details={"norm": float(norm)}
            )
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    @classmethod
    def normalized(cls, spin: SpinQuantum, amplitudes: Sequence[complex]) -> "PureState":
        """Build a state after dividing out the norm."""
        vector = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise NumericalValidationError("Cannot normalize the zero vector", check="normalization")
        return cls(spin, vector / norm)

    @classmethod
    def dicke(cls, spin: SpinQuantum, index: int) -> "PureState":
        """Basis state |s, s-index>."""
        if not 0 <= index < spin.dim:
            raise ValidationError(f"Dicke index {index} out of range for {spin}", field="index")
        vector = np.zeros(spin.dim, dtype=complex)
        vector[index] = 1.0
        return cls(spin, vector)

    def projector(self) -> "DensityOperator":
        return DensityOperator(self.spin, np.outer(self.amplitudes, self.amplitudes.conj()))

    def inner(self, other: "PureState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Hermitian, unit-trace, positive semidefinite state of the top.

    Attributes:
        spin: Spin quantum number
        matrix: dim x dim complex matrix in basis order
    """

    spin: SpinQuantum
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        dim = self.spin.dim
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(dim, matrix.shape[0] if matrix.ndim else 0, "density matrix")
        validate_density_matrix(matrix)
        object.__setattr__(self, "matrix", _frozen(matrix))

    @classmethod
    def maximally_mixed(cls, spin: SpinQuantum) -> "DensityOperator":
        return cls(spin, np.eye(spin.dim, dtype=complex) / spin.dim)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def validate_density_matrix(matrix: np.ndarray) -> None:
    """Raise NumericalValidationError unless `matrix` is a valid state."""
    hermiticity = float(np.max(np.abs(matrix - matrix.conj().T)))
    if hermiticity > TOLERANCES.CLOSED_FORM:
        raise NumericalValidationError(
            "Density matrix is not Hermitian",
            check="hermiticity",
            details={"max_deviation": hermiticity}
        )
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > TOLERANCES.CLOSED_FORM:
        raise NumericalValidationError(
            "Density matrix does not have unit trace",
            check="trace",
            details={"trace": [trace.real, trace.imag]}
        )
    smallest = float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0])
    if smallest < TOLERANCES.EIGENVALUE_FLOOR:
        raise NumericalValidationError(
            "Density matrix has a negative eigenvalue",
            check="positivity",
            details={"min_eigenvalue": smallest}
        )


@dataclass(frozen=True, eq=False)
class SpinOps:
    """Matrix representations of the angular momentum operators."""

    Sz: np.ndarray
    Splus: np.ndarray
    Sminus: np.ndarray
    Sx: np.ndarray
    Sy: np.ndarray


@dataclass(frozen=True)
class PhasePoint:
    """
    Point on the unit sphere.

    Attributes:
        theta: Polar angle in [0, pi]
        phi: Azimuth, normalized into [0, 2 pi)
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        theta = float(self.theta)
        phi = float(self.phi)
        if not (np.isfinite(theta) and np.isfinite(phi)):
            raise ValidationError("Phase point angles must be finite", field="theta")
        if theta < -TOLERANCES.POLE or theta > np.pi + TOLERANCES.POLE:
            raise ValidationError(f"theta must lie in [0, pi], got {theta}", field="theta")
        object.__setattr__(self, "theta", min(max(theta, 0.0), np.pi))
        object.__setattr__(self, "phi", float(np.mod(phi, TWO_PI)))

    @classmethod
    def from_z(cls, z: complex) -> "PhasePoint":
        """Inverse stereographic projection; infinite z maps to the south pole."""
        z = complex(z)
        if not np.isfinite(z):
            return cls(np.pi, 0.0)
        return cls(2.0 * np.arctan(abs(z)), float(np.angle(z)))

    @classmethod
    def coerce(cls, value: Union["PhasePoint", complex, float]) -> "PhasePoint":
        """Accept either a PhasePoint or a stereographic label."""
        if isinstance(value, PhasePoint):
            return value
        return cls.from_z(complex(value))

    @property
    def is_south_pole(self) -> bool:
        return self.theta > np.pi - TOLERANCES.POLE

    @property
    def z(self) -> complex:
        """Stereographic label; complex infinity at the south pole."""
        if self.is_south_pole:
            return complex(np.inf, 0.0)
        return complex(np.exp(1j * self.phi) * np.tan(self.theta / 2.0))

    def negated(self) -> "PhasePoint":
        """The point labeled -z."""
        return PhasePoint(self.theta, self.phi + np.pi)

    def antipode(self) -> "PhasePoint":
        """The point labeled -1/conj(z)."""
        return PhasePoint(np.pi - self.theta, self.phi + np.pi)


PointLike = Union[PhasePoint, complex, float]


@dataclass(frozen=True, eq=False)
class QGrid:
    """
    Real samples on a tensor-product spherical grid.

    Nodes are (thetas[i], phis[j]); `weights[i, j]` realizes d mu so that the
    weights sum to 2s+1. `values` usually hold a Q-function, but the type is
    also used for classical distributions and for generator outputs.
    """

    spin: SpinQuantum
    thetas: np.ndarray
    phis: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        thetas = np.asarray(self.thetas, dtype=float)
        phis = np.asarray(self.phis, dtype=float)
        shape = (thetas.size, phis.size)
        weights = np.asarray(self.weights, dtype=float).reshape(shape)
        values = np.asarray(self.values, dtype=float).reshape(shape)
        if np.any(weights <= 0.0) or not np.all(np.isfinite(weights)):
            raise NumericalValidationError("Grid weights must be positive and finite", check="weights")
        if not np.all(np.isfinite(values)):
            raise NumericalValidationError("Grid values must be finite", check="values")
        for name, array in (("thetas", thetas), ("phis", phis), ("weights", weights), ("values", values)):
            object.__setattr__(self, name, _frozen(array))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def n_theta(self) -> int:
        return self.thetas.size

    @property
    def n_phi(self) -> int:
        return self.phis.size

    @property
    def node_count(self) -> int:
        return self.values.size

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Broadcast (theta, phi) arrays of the grid shape."""
        return np.meshgrid(self.thetas, self.phis, indexing="ij")

    @property
    def z(self) -> np.ndarray:
        theta, phi = self.mesh()
        return np.exp(1j * phi) * np.tan(theta / 2.0)

    def nodes(self) -> Iterator[PhasePoint]:
        """Nodes in row order (theta-major)."""
        for theta in self.thetas:
            for phi in self.phis:
                yield PhasePoint(theta, phi)

    def is_exact_for(self, spin: Optional[SpinQuantum] = None) -> bool:
        spin = spin or self.spin
        return self.n_theta >= minimum_theta_nodes(spin) and self.n_phi >= minimum_phi_nodes(spin)

    def require_exact(self) -> None:
        if not self.is_exact_for():
            raise GridResolutionError(self.spin.two_s, self.n_theta, self.n_phi)

    def with_values(self, values: np.ndarray) -> "QGrid":
        return QGrid(self.spin, self.thetas, self.phis, self.weights, values)

    def integrate(self, integrand: Optional[np.ndarray] = None) -> complex:
        """Sum of w * values * integrand over all nodes."""
        weighted = self.weights * self.values
        if integrand is None:
            return complex(np.sum(weighted))
        return complex(np.sum(weighted * integrand))

    def total(self) -> float:
        return float(np.sum(self.weights * self.values))

    def theta_marginal(self) -> np.ndarray:
        """Probability carried by each theta ring."""
        return np.sum(self.weights * self.values, axis=1)

    def phi_marginal(self) -> np.ndarray:
        """Probability carried by each azimuthal column."""
        return np.sum(self.weights * self.values, axis=0)

    def same_nodes(self, other: "QGrid") -> bool:
        return (
            self.spin == other.spin
            and self.shape == other.shape
            and np.array_equal(self.thetas, other.thetas)
            and np.array_equal(self.phis, other.phis)
            and np.array_equal(self.weights, other.weights)
        )

    def validate_distribution(self, tolerance: float = TOLERANCES.QUADRATURE) -> None:
        """
        Check normalization against d mu and positivity of the values.

        Raises:
            NumericalValidationError: If either check fails
        """
        total = self.total()
        if abs(total - 1.0) > tolerance:
            raise NumericalValidationError(
                f"Distribution is not normalized (integral={total!r})",
                check="normalization",
                details={"integral": total, "tolerance": tolerance}
            )
        smallest = float(np.min(self.values))
        if smallest < TOLERANCES.EIGENVALUE_FLOOR:
            raise NumericalValidationError(
                "Distribution has negative values",
                check="positivity",
                details={"min_value": smallest}
            )


@dataclass(frozen=True)
class Moments:
    """Quantum moments <Sz>, <S->, <Sz^2>, <S-^2>."""

    sz: float
    sminus: complex
    sz2: float
    sminus2: complex

    def as_dict(self) -> dict:
        return {"Sz": self.sz, "Sminus": self.sminus, "Sz2": self.sz2, "Sminus2": self.sminus2}


@dataclass(frozen=True)
class ClassicalMoments:
    """Classical expectations E(Sz) and E(S-)."""

    sz: float
    sminus: complex

    def as_dict(self) -> dict:
        return {"Sz": self.sz, "Sminus": self.sminus}


@dataclass(frozen=True)
class Sz2Kernel:
    """
    Coefficients of the <Sz^2> integrand
        (a + b |z|^2 + c |z|^4) / (1 + |z|^2)^2.
    """

    a: float
    b: float
    c: float

    @classmethod
    def exact(cls, spin: SpinQuantum) -> "Sz2Kernel":
        s = spin.s
        return cls((s + 1) ** 2, -2.0 * (s + 1) * (s + 2), (s + 1) ** 2)

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        """Kernel as a function of theta: 1/(1+|z|^2) = cos^2(theta/2)."""
        cos2 = np.cos(np.asarray(theta) / 2.0) ** 2
        sin2 = 1.0 - cos2
        return self.a * cos2 ** 2 + self.b * cos2 * sin2 + self.c * sin2 ** 2


@dataclass(frozen=True, eq=False)
class InversionResult:
    """Outcome of reconstructing a state from Q samples."""

    rho: DensityOperator
    residual: float
    rank: int


# ============================================================================
# Operators and coherent states
# ============================================================================


def spin_operators(spin: SpinQuantum) -> SpinOps:
    """
    Angular momentum matrices in the |s,s>..|s,-s> basis.

    S+ sits on the superdiagonal: S+|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>.
    """
    m = spin.m_values
    s = spin.s
    sz = np.diag(m).astype(complex)
    ladder = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(ladder, k=1).astype(complex)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2.0
    sy = (splus - sminus) / 2.0j
    return SpinOps(
        Sz=_frozen(sz),
        Splus=_frozen(splus),
        Sminus=_frozen(sminus),
        Sx=_frozen(sx),
        Sy=_frozen(sy),
    )


def log_binomial(n: int, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def coherent_amplitudes(spin: SpinQuantum, theta, phi) -> np.ndarray:
    """
    Coherent-state amplitudes for arrays of angles.

    a_k = binom(2s,k)^{1/2} cos^{2s-k}(theta/2) sin^k(theta/2) e^{i k phi},
    evaluated in log space. The trailing axis indexes the basis.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    k = np.arange(spin.dim, dtype=float)
    log_magnitude = (
        0.5 * log_binomial(spin.two_s, k)
        + xlogy(spin.two_s - k, np.cos(theta / 2.0))
        + xlogy(k, np.sin(theta / 2.0))
    )
    return np.exp(log_magnitude) * np.exp(1j * k * phi)


def coherent_state(spin: SpinQuantum, point: PointLike) -> PureState:
    """
    Spin coherent state |z>.

    Equivalent to (1+|z|^2)^{-s} sum_k binom(2s,k)^{1/2} z^k |s,s-k>. The
    south pole gives |s,-s>.
    """
    point = PhasePoint.coerce(point)
    amplitudes = coherent_amplitudes(spin, point.theta, point.phi)
    # log-space evaluation leaves the norm within a few ulps of 1
    return PureState.normalized(spin, amplitudes)


def coherent_overlap(spin: SpinQuantum, point1: PointLike, point2: PointLike) -> complex:
    """<z1|z2> = [cos cos' + sin sin' e^{i(phi2 - phi1)}]^{2s} in half-angles."""
    p1 = PhasePoint.coerce(point1)
    p2 = PhasePoint.coerce(point2)
    base = (
        np.cos(p1.theta / 2.0) * np.cos(p2.theta / 2.0)
        + np.sin(p1.theta / 2.0) * np.sin(p2.theta / 2.0) * np.exp(1j * (p2.phi - p1.phi))
    )
    return complex(base ** spin.two_s)


def q_function(rho: DensityOperator, point: PointLike) -> float:
    """Q(z) = <z|rho|z>."""
    point = PhasePoint.coerce(point)
    amplitudes = coherent_amplitudes(rho.spin, point.theta, point.phi)
    return float(np.real(np.vdot(amplitudes, rho.matrix @ amplitudes)))


def q_coherent_angles(spin: SpinQuantum, theta, phi, point0: PointLike) -> np.ndarray:
    """Vectorized Q of the coherent projector |z0><z0| at angle arrays."""
    p0 = PhasePoint.coerce(point0)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    base = (
        np.cos(theta / 2.0) * np.cos(p0.theta / 2.0)
        + np.sin(theta / 2.0) * np.sin(p0.theta / 2.0) * np.exp(1j * (phi - p0.phi))
    )
    return np.abs(base) ** (2 * spin.two_s)


def q_coherent(spin: SpinQuantum, point: PointLike, point0: PointLike) -> float:
    """
    Q of the coherent state |z0> at z:
    [(1 + conj(z0) z)(1 + z0 conj(z)) / ((1+|z0|^2)(1+|z|^2))]^{2s}.
    """
    point = PhasePoint.coerce(point)
    return float(q_coherent_angles(spin, point.theta, point.phi, point0))


# ============================================================================
# Quadrature grids
# ============================================================================


def minimum_theta_nodes(spin: SpinQuantum) -> int:
    return SPIN_LIMITS.THETA_NODES_PER_TWO_S * spin.two_s + SPIN_LIMITS.THETA_NODES_OFFSET


def minimum_phi_nodes(spin: SpinQuantum) -> int:
    return SPIN_LIMITS.PHI_NODES_PER_TWO_S * spin.two_s + SPIN_LIMITS.PHI_NODES_OFFSET


def make_grid(spin: SpinQuantum, n_theta: int, n_phi: int) -> QGrid:
    """
    Gauss-Legendre x uniform grid realizing d mu.

    Nodes are sorted by increasing theta; the weights sum to 2s+1. Values are
    initialized to the Q of the maximally mixed state, 1/(2s+1).

    Raises:
        GridResolutionError: If n_theta < 2s+2 or n_phi < 4s+2
    """
    if n_theta < minimum_theta_nodes(spin) or n_phi < minimum_phi_nodes(spin):
        raise GridResolutionError(spin.two_s, n_theta, n_phi)

    x, w = roots_legendre(n_theta)
    order = np.argsort(-x)  # cos(theta) descending -> theta ascending
    thetas = np.arccos(np.clip(x[order], -1.0, 1.0))
    phis = TWO_PI * np.arange(n_phi) / n_phi
    weights = np.outer(w[order], np.full(n_phi, TWO_PI / n_phi)) * spin.dim / (4.0 * np.pi)

    logger.debug(
        "Grid built",
        extra={"two_s": spin.two_s, "n_theta": n_theta, "n_phi": n_phi}
    )
    return QGrid(spin, thetas, phis, weights, np.full((n_theta, n_phi), 1.0 / spin.dim))


def grid_amplitudes(grid: QGrid) -> np.ndarray:
    """Coherent amplitudes at every node, shape (n_theta, n_phi, dim)."""
    theta, phi = grid.mesh()
    return coherent_amplitudes(grid.spin, theta, phi)


def sample_q_function(rho: DensityOperator, grid: QGrid) -> QGrid:
    """Q of `rho` at every node of `grid`."""
    if rho.spin != grid.spin:
        raise DimensionMismatchError(grid.spin.dim, rho.spin.dim, "density matrix")
    amplitudes = grid_amplitudes(grid)
    values = np.einsum("ijk,kl,ijl->ij", amplitudes.conj(), rho.matrix, amplitudes).real
    return grid.with_values(values)


def sample_q_coherent(grid: QGrid, point0: PointLike) -> QGrid:
    theta, phi = grid.mesh()
    return grid.with_values(q_coherent_angles(grid.spin, theta, phi, point0))


def resolution_of_identity(grid: QGrid) -> np.ndarray:
    """Quadrature estimate of the integral of |z><z| against d mu."""
    amplitudes = grid_amplitudes(grid)
    return np.einsum("ij,ijk,ijl->kl", grid.weights, amplitudes, amplitudes.conj())


# ============================================================================
# Moments
# ============================================================================


def moments_from_rho(rho: DensityOperator) -> Moments:
    """Trace oracle for the moments."""
    ops = spin_operators(rho.spin)
    sz2 = ops.Sz @ ops.Sz
    sminus2 = ops.Sminus @ ops.Sminus
    return Moments(
        sz=float(np.real(np.trace(rho.matrix @ ops.Sz))),
        sminus=complex(np.trace(rho.matrix @ ops.Sminus)),
        sz2=float(np.real(np.trace(rho.matrix @ sz2))),
        sminus2=complex(np.trace(rho.matrix @ sminus2)),
    )


def moments_from_q(grid: QGrid, sz2_kernel: Optional[Sz2Kernel] = None) -> Moments:
    """
    Quantum moments as integrals of Q against the symbol kernels:

        <Sz>    : (s+1) cos(theta)                 = (s+1)(1-|z|^2)/(1+|z|^2)
        <S->    : (s+1) sin(theta) e^{-i phi}      = 2(s+1) conj(z)/(1+|z|^2)
        <Sz^2>  : Sz2Kernel.exact(spin)
        <S-^2>  : (s+1)(2s+3)/2 sin^2(theta) e^{-2 i phi}

    Raises:
        GridResolutionError: If the grid is not exact for the spin
    """
    grid.require_exact()
    spin = grid.spin
    s = spin.s
    kernel = sz2_kernel or Sz2Kernel.exact(spin)
    theta, phi = grid.mesh()
    return Moments(
        sz=grid.integrate((s + 1) * np.cos(theta)).real,
        sminus=grid.integrate((s + 1) * np.sin(theta) * np.exp(-1j * phi)),
        sz2=grid.integrate(kernel.evaluate(theta)).real,
        sminus2=grid.integrate(
            (s + 1) * (2 * s + 3) / 2.0 * np.sin(theta) ** 2 * np.exp(-2j * phi)
        ),
    )


def classical_moments(grid: QGrid) -> ClassicalMoments:
    """
    Classical expectations with factor s:
    E(Sz) = int Q s cos(theta), E(S-) = int Q s sin(theta) e^{-i phi}.
    """
    grid.require_exact()
    s = grid.spin.s
    theta, phi = grid.mesh()
    return ClassicalMoments(
        sz=grid.integrate(s * np.cos(theta)).real,
        sminus=grid.integrate(s * np.sin(theta) * np.exp(-1j * phi)),
    )


def fit_sz2_kernel(spin: SpinQuantum) -> Sz2Kernel:
    """
    Fit (a, b, c) of the <Sz^2> kernel against the trace oracle.

    Each Dicke state |s,m> gives one equation int Q kernel = m^2. The three
    basis integrals are quadratics in m, so the fit is exact and unique once
    there are three Dicke states (s >= 1).
    """
    if spin.dim < 3:
        raise ValidationError("The Sz^2 kernel fit needs s >= 1", field="s")

    grid = make_grid(spin, minimum_theta_nodes(spin), minimum_phi_nodes(spin))
    theta, _ = grid.mesh()
    cos2 = np.cos(theta / 2.0) ** 2
    sin2 = 1.0 - cos2
    basis = (cos2 ** 2, cos2 * sin2, sin2 ** 2)

    design = np.empty((spin.dim, 3))
    for index in range(spin.dim):
        q = sample_q_function(PureState.dicke(spin, index).projector(), grid)
        design[index] = [q.integrate(b).real for b in basis]
    target = spin.m_values ** 2

    coefficients, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < 3:
        raise NumericalValidationError("Sz^2 kernel fit is rank deficient", check="rank")
    logger.debug("Sz^2 kernel fitted", extra={"two_s": spin.two_s, "coefficients": coefficients.tolist()})
    return Sz2Kernel(*map(float, coefficients))


# ============================================================================
# Inversion
# ============================================================================


def _inversion_design(spin: SpinQuantum, amplitudes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Real design matrix for Q = sum_kl conj(a_k) rho_kl a_l with trace 1.

    Unknowns: rho_kk for k < dim-1 (the last diagonal entry is 1 minus
    their sum), then Re and Im of rho_kl for k < l.
    """
    dim = spin.dim
    populations = np.abs(amplitudes) ** 2
    last = populations[:, -1]
    columns = [populations[:, k] - last for k in range(dim - 1)]
    for k in range(dim):
        for l in range(k + 1, dim):
            product = amplitudes[:, k].conj() * amplitudes[:, l]
            columns.append(2.0 * product.real)
            columns.append(-2.0 * product.imag)
    return np.column_stack(columns), last


def invert_q(samples: QGrid) -> InversionResult:
    """
    Reconstruct rho from Q samples by linear least squares.

    The density matrix is parameterized as a Hermitian, unit-trace matrix, so
    both constraints hold exactly for any solution.

    Raises:
        NumericalValidationError: Too few samples, a rank-deficient sample set,
            or a solution that is not a valid state
    """
    spin = samples.spin
    dim = spin.dim
    unknowns = dim * dim - 1
    if samples.node_count < dim * dim:
        raise NumericalValidationError(
            f"Inversion needs at least {dim * dim} samples, got {samples.node_count}",
            check="sample_count"
        )

    theta, phi = samples.mesh()
    amplitudes = coherent_amplitudes(spin, theta.ravel(), phi.ravel())
    design, offset = _inversion_design(spin, amplitudes)
    target = samples.values.ravel() - offset

    solution, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < unknowns:
        raise NumericalValidationError(
            "Sample set is rank deficient for inversion",
            check="rank",
            details={"rank": int(rank), "required": unknowns}
        )

    matrix = np.zeros((dim, dim), dtype=complex)
    diagonal = solution[: dim - 1]
    matrix[np.arange(dim - 1), np.arange(dim - 1)] = diagonal
    matrix[dim - 1, dim - 1] = 1.0 - np.sum(diagonal)
    cursor = dim - 1
    for k in range(dim):
        for l in range(k + 1, dim):
            value = solution[cursor] + 1j * solution[cursor + 1]
            matrix[k, l] = value
            matrix[l, k] = np.conj(value)
            cursor += 2

    residual = float(np.max(np.abs(design @ solution - target)))
    logger.debug("Q inversion solved", extra={"two_s": spin.two_s, "residual": residual, "rank": int(rank)})
    return InversionResult(rho=DensityOperator(spin, matrix), residual=residual, rank=int(rank))
