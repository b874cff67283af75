"""
Exact quantum dynamics of the top H = omega Sz + (J/2s) Sz^2.

H is diagonal in the Dicke basis, so every evolution is a phase
multiplication. The module also extracts the differential generator of the
Q-function evolution,

    dQ/dt = -drift * z dQ/dz + kappa * d^2Q/dz^2 + c.c.,
    drift = i (omega + J (1-|z|^2)/(1+|z|^2) - J/(2s)),
    kappa = i (J/2s) z^2,

and exposes the commutator oracle it is checked against.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from spintop.constants import TOLERANCES
from spintop.exceptions import DimensionMismatchError, ValidationError
from spintop.physics.spin_core import (
    DensityOperator,
    PhasePoint,
    PointLike,
    PureState,
    SpinQuantum,
    coherent_amplitudes,
    coherent_state,
    spin_operators,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class TopParams:
    """
    Parameters of the nonlinear top.

    Attributes:
        omega: Linear precession rate
        J: Twist strength
        spin: Spin quantum number
    """

    omega: float
    J: float
    spin: SpinQuantum

    def __post_init__(self) -> None:
        for name in ("omega", "J"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}", field=name)
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True, eq=False)
class GeneratorCoefficients:
    """
    Coefficients of the Q evolution equation at one phase point.

    Attributes:
        drift: Coefficient multiplying z d/dz (velocity convention)
        diffusion: Symmetric 2x2 matrix D with dQ/dt containing sum D_ij d_i d_j Q
            in the chart z = x + i y
    """

    drift: complex
    diffusion: np.ndarray


def energies(params: TopParams) -> np.ndarray:
    """Eigenvalues of H in basis order."""
    m = params.spin.m_values
    return params.omega * m + params.J / params.spin.two_s * m ** 2


def hamiltonian(params: TopParams) -> np.ndarray:
    return np.diag(energies(params)).astype(complex)


def _phases(params: TopParams, t: float) -> np.ndarray:
    return np.exp(-1j * energies(params) * t)


def _check_spin(spin: SpinQuantum, params: TopParams) -> None:
    if spin != params.spin:
        raise DimensionMismatchError(params.spin.dim, spin.dim, "state")


def evolve_unitary(rho0: DensityOperator, params: TopParams, t: float) -> DensityOperator:
    """
    rho(t)_{mm'} = rho0_{mm'} exp(-i (E_m - E_m') t).

    Raises:
        DimensionMismatchError: If rho0 is not a state of params.spin
    """
    _check_spin(rho0.spin, params)
    phases = _phases(params, t)
    matrix = rho0.matrix * np.outer(phases, phases.conj())
    return DensityOperator(rho0.spin, matrix)


def evolve_state(psi: PureState, params: TopParams, t: float) -> PureState:
    _check_spin(psi.spin, params)
    return PureState(psi.spin, psi.amplitudes * _phases(params, t))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    return abs(a.inner(b)) ** 2


def state_fidelity(rho: DensityOperator, psi: PureState) -> float:
    """<psi|rho|psi>."""
    return float(np.real(np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)))


def cat_state(point0: PointLike, spin: SpinQuantum) -> PureState:
    """
    2^{-1/2} (e^{-i pi/4} |z0> + (-1)^s e^{i pi/4} |-z0>), renormalized.

    This is the state reached from |z0> at t = pi s / J when omega = 0. The
    branches are orthogonal only on the equator; the norm of the sum is 1
    regardless because <z0|-z0> is real.

    Raises:
        ValidationError: For half-integer s, or z0 at a pole
    """
    if not spin.is_integer:
        raise ValidationError("Cat states are defined for integer s only", field="s")
    point0 = PhasePoint.coerce(point0)
    if point0.theta < TOLERANCES.POLE or point0.is_south_pole:
        raise ValidationError("|z0> and |-z0> coincide at the poles", field="z0")

    sign = (-1) ** (spin.two_s // 2)
    plus = coherent_state(spin, point0).amplitudes
    minus = coherent_state(spin, point0.negated()).amplitudes
    amplitudes = (np.exp(-1j * np.pi / 4) * plus + sign * np.exp(1j * np.pi / 4) * minus) / np.sqrt(2.0)
    return PureState.normalized(spin, amplitudes)


def cat_time(params: TopParams) -> float:
    """t = pi s / J."""
    if params.J == 0.0:
        raise ValidationError("Cat time is undefined for J = 0", field="J")
    return np.pi * params.spin.s / params.J


def revival_time(params: TopParams) -> float:
    """t = 4 pi s / J, after which every state returns (omega = 0)."""
    if params.J == 0.0:
        raise ValidationError("Revival time is undefined for J = 0", field="J")
    return 4.0 * np.pi * params.spin.s / params.J


def expectation_sminus(rho0: DensityOperator, params: TopParams, t: float) -> complex:
    """<S-> of the state evolved to time t."""
    rho = evolve_unitary(rho0, params, t)
    return complex(np.trace(rho.matrix @ spin_operators(rho.spin).Sminus))


# ============================================================================
# Q-function generator
# ============================================================================


def generator_coefficients(point: PointLike, params: TopParams) -> GeneratorCoefficients:
    """
    Drift and diffusion of the Q evolution equation at `point`.

    Expanding (z d/dz)^2 = z d/dz + z^2 d^2/dz^2 moves a -J/(2s) into the
    drift. The second-order part kappa d^2/dz^2 + c.c. with kappa = A + iB
    reads (A/2)(Q_xx - Q_yy) + B Q_xy, so D = [[A, B], [B, -A]] / 2 and
    det D = -|kappa|^2 / 4.

    Raises:
        ValidationError: At the south pole, where the chart is undefined
    """
    point = PhasePoint.coerce(point)
    if point.is_south_pole:
        raise ValidationError("Generator coefficients need a finite z", field="z")
    z = point.z
    r = abs(z) ** 2
    s = params.spin.s
    drift = 1j * (params.omega + params.J * (1.0 - r) / (1.0 + r) - params.J / (2.0 * s))
    kappa = 1j * params.J / (2.0 * s) * z ** 2
    diffusion = 0.5 * np.array([
        [kappa.real, kappa.imag],
        [kappa.imag, -kappa.real],
    ])
    return GeneratorCoefficients(drift=complex(drift), diffusion=diffusion)


def apply_generator(
    q: Callable[[complex], float],
    point: PointLike,
    params: TopParams,
    h: float = 1e-4,
) -> float:
    """
    Apply the extracted generator to a function of z by central differences.

    The stencil error is O(h^2).
    """
    point = PhasePoint.coerce(point)
    coefficients = generator_coefficients(point, params)
    z = point.z
    q0 = q(z)
    qx_plus, qx_minus = q(z + h), q(z - h)
    qy_plus, qy_minus = q(z + 1j * h), q(z - 1j * h)

    qx = (qx_plus - qx_minus) / (2 * h)
    qy = (qy_plus - qy_minus) / (2 * h)
    qxx = (qx_plus - 2 * q0 + qx_minus) / h ** 2
    qyy = (qy_plus - 2 * q0 + qy_minus) / h ** 2
    qxy = (
        q(z + h + 1j * h) - q(z + h - 1j * h) - q(z - h + 1j * h) + q(z - h - 1j * h)
    ) / (4 * h ** 2)

    first_order = -np.real(coefficients.drift * z * (qx - 1j * qy))
    d = coefficients.diffusion
    second_order = d[0, 0] * qxx + 2 * d[0, 1] * qxy + d[1, 1] * qyy
    return float(first_order + second_order)


def qdot_quantum(rho: DensityOperator, params: TopParams, point: PointLike) -> float:
    """dQ/dt at t = 0 from the commutator: <z| -i[H, rho] |z>."""
    _check_spin(rho.spin, params)
    point = PhasePoint.coerce(point)
    h = hamiltonian(params)
    commutator = h @ rho.matrix - rho.matrix @ h
    amplitudes = coherent_amplitudes(rho.spin, point.theta, point.phi)
    return float(np.real(np.vdot(amplitudes, -1j * commutator @ amplitudes)))


def qdot_quantum_grid(rho: DensityOperator, params: TopParams, thetas, phis) -> np.ndarray:
    """Vectorized qdot_quantum over angle arrays."""
    _check_spin(rho.spin, params)
    h = hamiltonian(params)
    commutator = -1j * (h @ rho.matrix - rho.matrix @ h)
    amplitudes = coherent_amplitudes(rho.spin, thetas, phis)
    return np.einsum("...k,kl,...l->...", amplitudes.conj(), commutator, amplitudes).real
