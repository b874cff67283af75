"""
Collective dephasing of the top.

The master equation

    d rho/dt = -i [H, rho] - (gamma/2s) [Sz, [Sz, rho]]

is diagonal in the Dicke basis, so it is solved exactly: every matrix element
picks up the unitary phase and a Gaussian-in-(m - m') decay factor. The same
elementwise map acts on non-Hermitian dyads |z1><z2|, which is what the
off-diagonal propagator P(z; z1, z2, t) needs.

A Lindblad-form integrator (collapse operator sqrt(gamma/s) Sz) is kept as an
independent oracle for the closed form.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import spearmanr

from spintop.constants import TOLERANCES
from spintop.exceptions import DimensionMismatchError, NumericalValidationError, ValidationError
from spintop.physics.classical_top import coherent_distribution, evolve_classical
from spintop.physics.quantum_top import TopParams, energies, hamiltonian
from spintop.physics.spin_core import (
    DensityOperator,
    PhasePoint,
    PointLike,
    QGrid,
    SpinQuantum,
    coherent_amplitudes,
    coherent_state,
    sample_q_function,
    spin_operators,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

# P(0) below this magnitude leaves the normalized decay rate undefined
_RATE_FLOOR = 1e-300


@dataclass(frozen=True)
class DephasingParams:
    """
    Parameters of the dephasing master equation.

    Attributes:
        gamma: Dephasing rate (>= 0)
        top: Hamiltonian parameters
    """

    gamma: float
    top: TopParams

    def __post_init__(self) -> None:
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise ValidationError(f"gamma must be a finite rate >= 0, got {self.gamma}", field="gamma")
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def spin(self) -> SpinQuantum:
        return self.top.spin


@dataclass(frozen=True, eq=False)
class LongTimeReport:
    """
    Dephased quantum Q against the phase-diffused classical Q.

    Attributes:
        gamma_t: Dimensionless dephasing strength
        phi_dependence: Largest deviation of quantum Q from its azimuthal average
        initial_marginal_gap: Largest theta-marginal difference, quantum(t) vs t = 0
        classical_marginal_gap: Largest theta-marginal difference, quantum vs classical
        sup_gap: Sup-norm gap between quantum Q and azimuthally averaged classical Q
    """

    gamma_t: float
    phi_dependence: float
    initial_marginal_gap: float
    classical_marginal_gap: float
    sup_gap: float


# ============================================================================
# Exact solution
# ============================================================================


def dephasing_factors(spin: SpinQuantum, gamma: float, t: float) -> np.ndarray:
    """exp(-(gamma/2s)(m - m')^2 t) for every basis pair."""
    m = spin.m_values
    return np.exp(-gamma / spin.two_s * np.subtract.outer(m, m) ** 2 * t)


def _dephasing_map(matrix: np.ndarray, dp: DephasingParams, t: float) -> np.ndarray:
    phases = np.exp(-1j * energies(dp.top) * t)
    return matrix * np.outer(phases, phases.conj()) * dephasing_factors(dp.spin, dp.gamma, t)


def evolve_dephasing(rho0: DensityOperator, dp: DephasingParams, t: float) -> DensityOperator:
    """
    rho(t)_mm' = rho0_mm' exp(-i (E_m - E_m') t) exp(-(gamma/2s)(m - m')^2 t).

    Populations never change; gamma = 0 reduces to evolve_unitary.

    Raises:
        DimensionMismatchError: If rho0 is not a state of dp.spin
    """
    if rho0.spin != dp.spin:
        raise DimensionMismatchError(dp.spin.dim, rho0.spin.dim, "density matrix")
    return DensityOperator(rho0.spin, _dephasing_map(rho0.matrix, dp, t))


# ============================================================================
# Lindblad integrator
# ============================================================================


def lindblad_rhs(h: np.ndarray, collapse: np.ndarray):
    """
    Right-hand side of d rho/dt = -i[H, rho] + L rho L^+ - {L^+ L, rho}/2
    acting on the flattened density matrix.
    """
    dim = h.shape[0]
    collapse_dagger = collapse.conj().T
    collapse_squared = collapse_dagger @ collapse

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        rho_dot = -1j * (h @ rho - rho @ h)
        rho_dot += collapse @ rho @ collapse_dagger - 0.5 * (collapse_squared @ rho + rho @ collapse_squared)
        return rho_dot.ravel()

    return rhs


def integrate_master_equation(
    rho0: DensityOperator,
    dp: DephasingParams,
    times: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> np.ndarray:
    """
    Integrate the master equation with RK45 from t = 0.

    Returns:
        Array of shape (len(times), dim, dim) with rho at each requested time

    Raises:
        ValidationError: If times are empty, negative or not increasing
        NumericalValidationError: If the integrator fails
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValidationError("times must be a non-empty, non-decreasing list of t >= 0", field="t")
    if rho0.spin != dp.spin:
        raise DimensionMismatchError(dp.spin.dim, rho0.spin.dim, "density matrix")

    dim = dp.spin.dim
    collapse = np.sqrt(dp.gamma / dp.spin.s) * spin_operators(dp.spin).Sz
    if times[-1] == 0.0:
        return np.repeat(rho0.matrix[None, :, :], times.size, axis=0)

    solution = solve_ivp(
        lindblad_rhs(hamiltonian(dp.top), collapse),
        t_span=(0.0, times[-1]),
        y0=np.array(rho0.matrix, dtype=complex).ravel(),
        method="RK45",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )
    if not solution.success:
        raise NumericalValidationError(
            f"Master equation integration failed: {solution.message}",
            check="integration"
        )
    logger.debug("Master equation integrated", extra={"two_s": dp.spin.two_s, "steps": int(solution.t.size)})
    return solution.y.T.reshape(-1, dim, dim)


# ============================================================================
# Off-diagonal propagator
# ============================================================================


def p_propagator(z: PointLike, z1: PointLike, z2: PointLike, t: float, dp: DephasingParams) -> complex:
    """
    P(z; z1, z2, t) = <z| e^{Dt}(|z1><z2|) |z>.

    With gamma = 0 this is L(z, z1; t) conj(L(z, z2; t)).
    """
    p, p1, p2 = (PhasePoint.coerce(value) for value in (z, z1, z2))
    spin = dp.spin
    a = coherent_amplitudes(spin, p.theta, p.phi)
    dyad = np.outer(coherent_amplitudes(spin, p1.theta, p1.phi), coherent_amplitudes(spin, p2.theta, p2.phi).conj())
    return complex(np.vdot(a, _dephasing_map(dyad, dp, t) @ a))


def _x_factor(p1: PhasePoint, p2: PhasePoint) -> float:
    """(|z1|^2 - |z2|^2) / ((1+|z1|^2)(1+|z2|^2)) written in half-angles."""
    sin1, cos1 = np.sin(p1.theta / 2.0) ** 2, np.cos(p1.theta / 2.0) ** 2
    sin2, cos2 = np.sin(p2.theta / 2.0) ** 2, np.cos(p2.theta / 2.0) ** 2
    return float(sin1 * cos2 - sin2 * cos1)


def short_time_factor(z1: PointLike, z2: PointLike, gamma: float, spin: SpinQuantum, t: float) -> float:
    """
    Leading large-s suppression of P at short times:
        1 - (gamma s t / 2) X^2,  X = (|z1|^2 - |z2|^2) / ((1+|z1|^2)(1+|z2|^2)).

    |X| <= 1, so the factor never exceeds 1 and equals 1 when |z1| = |z2|.
    """
    if t < 0:
        raise ValidationError("t must be >= 0", field="t")
    x = _x_factor(PhasePoint.coerce(z1), PhasePoint.coerce(z2))
    return 1.0 - 0.5 * gamma * spin.s * t * x ** 2


def dephasing_rate(z: PointLike, z1: PointLike, z2: PointLike, spin: SpinQuantum) -> complex:
    """
    Exact first-order decay coefficient of P(t)/P(0) at H = 0, per unit gamma:

        P(t)/P(0) = 1 - gamma t kappa + O(t^2),
        kappa = sum_kl w_kl (m_k - m_l)^2 / (2s) / sum_kl w_kl,
        w_kl = conj(a_k(z)) a_k(z1) conj(a_l(z2)) a_l(z).

    Raises:
        NumericalValidationError: If P(0) vanishes
    """
    p, p1, p2 = (PhasePoint.coerce(value) for value in (z, z1, z2))
    a = coherent_amplitudes(spin, p.theta, p.phi)
    left = a.conj() * coherent_amplitudes(spin, p1.theta, p1.phi)
    right = coherent_amplitudes(spin, p2.theta, p2.phi).conj() * a
    weights = np.outer(left, right)
    total = complex(np.sum(weights))
    if abs(total) < _RATE_FLOOR:
        raise NumericalValidationError("P vanishes at t = 0; the decay rate is undefined", check="rate")
    m = spin.m_values
    return complex(np.sum(weights * np.subtract.outer(m, m) ** 2) / spin.two_s / total)


def suppression_correlation(
    spin: SpinQuantum,
    gamma: float,
    t: float,
    moduli: Sequence[float],
) -> float:
    """
    Spearman rank correlation between X^2 and P(t)/P(0) at H = 0.

    Uses the family z = z1 = r, z2 = 1/r, along which both P(0) and the
    ratio are real.
    """
    dp = DephasingParams(gamma, TopParams(0.0, 0.0, spin))
    x_squared, ratios = [], []
    for r in moduli:
        z1 = PhasePoint.from_z(r)
        z2 = PhasePoint.from_z(1.0 / r)
        x_squared.append(_x_factor(z1, z2) ** 2)
        ratio = p_propagator(z1, z1, z2, t, dp) / p_propagator(z1, z1, z2, 0.0, dp)
        ratios.append(ratio.real)
    return float(spearmanr(x_squared, ratios).correlation)


# ============================================================================
# Long-time classical correspondence
# ============================================================================


def azimuthal_average(grid: QGrid) -> QGrid:
    """Replace every theta ring by its mean; the phi rule is uniform."""
    means = np.mean(grid.values, axis=1, keepdims=True)
    return grid.with_values(np.broadcast_to(means, grid.shape))


def phi_dependence(grid: QGrid) -> float:
    """Largest deviation of the values from their azimuthal average."""
    return float(np.max(np.abs(grid.values - np.mean(grid.values, axis=1, keepdims=True))))


def long_time_correspondence(point0: PointLike, dp: DephasingParams, t: float, grid: QGrid) -> LongTimeReport:
    """
    Compare dephased quantum evolution of |z0> with classical transport
    followed by azimuthal averaging, the gamma -> infinity fixed point of
    phase diffusion.

    Raises:
        GridResolutionError: If the grid is not exact for the spin
    """
    grid.require_exact()
    rho0 = coherent_state(dp.spin, point0).projector()
    initial = sample_q_function(rho0, grid)
    quantum = sample_q_function(evolve_dephasing(rho0, dp, t), grid)
    classical = evolve_classical(
        coherent_distribution(dp.spin, point0),
        dp.top,
        t,
        grid,
        normalization_tol=TOLERANCES.QUADRATURE,
    )

    report = LongTimeReport(
        gamma_t=dp.gamma * t,
        phi_dependence=phi_dependence(quantum),
        initial_marginal_gap=float(np.max(np.abs(quantum.theta_marginal() - initial.theta_marginal()))),
        classical_marginal_gap=float(np.max(np.abs(quantum.theta_marginal() - classical.theta_marginal()))),
        sup_gap=float(np.max(np.abs(quantum.values - azimuthal_average(classical).values))),
    )
    logger.debug("Long-time correspondence computed", extra={"gamma_t": report.gamma_t, "sup_gap": report.sup_gap})
    return report
