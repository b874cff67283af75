"""
Classical dynamics of the top.

The classical equations of motion z' = i (omega + J (1-|z|^2)/(1+|z|^2)) z
conserve theta and shear the azimuth: phi(t) = phi0 + (omega + J cos theta0) t.
Distributions are transported along these characteristics exactly, by
evaluating the initial distribution at the backward-mapped point.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from spintop.constants import TOLERANCES
from spintop.exceptions import NumericalValidationError, ValidationError
from spintop.physics.quantum_top import (
    GeneratorCoefficients,
    TopParams,
    evolve_unitary,
)
from spintop.physics.spin_core import (
    PhasePoint,
    PointLike,
    QGrid,
    SpinQuantum,
    classical_moments,
    coherent_state,
    moments_from_rho,
    q_coherent_angles,
    sample_q_function,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

TWO_PI = 2.0 * np.pi

# Vectorized distribution: f(theta, phi) -> values, broadcasting over arrays
Distribution = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ClassicalFlowResult:
    """Image of a phase point under the classical flow."""

    point: PhasePoint
    theta_t: float
    phi_t: float

    @property
    def z_t(self) -> complex:
        return self.point.z


@dataclass(frozen=True, eq=False)
class ShortTimeStudy:
    """
    Quantum/classical gaps at a sequence of short times.

    Attributes:
        times: Evolution times
        sup_gaps: max |Q_quantum - Q_classical| over the grid
        moment_gaps: |Delta<S->_quantum - Delta E(S-)_classical| / s, where
            Delta is the displacement from t = 0
        sup_slope: log-log slope of sup_gaps against times
        moment_slope: log-log slope of moment_gaps against times
    """

    times: np.ndarray
    sup_gaps: np.ndarray
    moment_gaps: np.ndarray
    sup_slope: float
    moment_slope: float


def angular_velocity(theta, params: TopParams):
    """phi' = omega + J cos(theta)."""
    return params.omega + params.J * np.cos(theta)


def flow_angles(thetas, phis, params: TopParams, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized flow on angle arrays; theta is returned untouched."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    return thetas, np.mod(phis + angular_velocity(thetas, params) * t, TWO_PI)


def flow(point0: PointLike, params: TopParams, t: float) -> ClassicalFlowResult:
    """
    Advance a phase point along the classical flow.

    Poles are fixed points and are returned unchanged.
    """
    point0 = PhasePoint.coerce(point0)
    if point0.theta < TOLERANCES.POLE or point0.is_south_pole:
        return ClassicalFlowResult(point0, point0.theta, point0.phi)
    _, phi_t = flow_angles(point0.theta, point0.phi, params, t)
    point = PhasePoint(point0.theta, float(phi_t))
    return ClassicalFlowResult(point, point.theta, point.phi)


def classical_generator_coefficients(point: PointLike, params: TopParams) -> GeneratorCoefficients:
    """Liouville equation coefficients: pure drift, zero diffusion."""
    point = PhasePoint.coerce(point)
    drift = 1j * angular_velocity(point.theta, params)
    return GeneratorCoefficients(drift=complex(drift), diffusion=np.zeros((2, 2)))


def coherent_distribution(spin: SpinQuantum, point0: PointLike) -> Distribution:
    """Q of |z0> as a vectorized distribution, the usual classical initial data."""
    point0 = PhasePoint.coerce(point0)

    def distribution(theta, phi):
        return q_coherent_angles(spin, theta, phi, point0)

    return distribution


def _periodic_interpolator(grid: QGrid) -> RegularGridInterpolator:
    """Bilinear interpolant in (cos theta, phi) with phi wrapped periodically."""
    cos_theta = np.cos(grid.thetas)
    order = np.argsort(cos_theta)
    phis = np.append(grid.phis, grid.phis[0] + TWO_PI)
    values = grid.values[order]
    values = np.concatenate([values, values[:, :1]], axis=1)
    return RegularGridInterpolator(
        (cos_theta[order], phis),
        values,
        method="linear",
        bounds_error=False,
        fill_value=None,
    )


def _interpolated_distribution(grid: QGrid) -> Distribution:
    interpolator = _periodic_interpolator(grid)
    phi_origin = grid.phis[0]

    def distribution(theta, phi):
        theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
        wrapped = phi_origin + np.mod(phi - phi_origin, TWO_PI)
        points = np.stack([np.cos(theta).ravel(), wrapped.ravel()], axis=-1)
        return np.clip(interpolator(points), 0.0, None).reshape(theta.shape)

    return distribution


def interpolation_error_estimate(grid: QGrid, params: TopParams, t: float) -> float:
    """
    Estimate the interpolation error of transporting grid-sampled data.

    Transports the data once from the full grid and once from every other
    azimuthal column, and returns the largest difference at the full nodes.
    """
    if grid.n_phi < 4:
        return float("nan")
    coarse = QGrid(
        grid.spin,
        grid.thetas,
        grid.phis[::2],
        grid.weights[:, ::2],
        grid.values[:, ::2],
    )
    theta, phi = grid.mesh()
    back_theta, back_phi = flow_angles(theta, phi, params, -t)
    fine_values = _interpolated_distribution(grid)(back_theta, back_phi)
    coarse_values = _interpolated_distribution(coarse)(back_theta, back_phi)
    return float(np.max(np.abs(fine_values - coarse_values)))


def evolve_classical(
    q0: Union[Distribution, QGrid],
    params: TopParams,
    t: float,
    grid: Optional[QGrid] = None,
    normalization_tol: float = TOLERANCES.CLASSICAL_NORMALIZATION,
) -> QGrid:
    """
    Liouville transport: Q(z, t) = Q0(flow(z, -t)) at every node.

    Args:
        q0: Initial distribution, either a vectorized function of
            (theta, phi) or a grid (interpolated bilinearly in (cos theta, phi))
        params: Top parameters
        t: Evolution time
        grid: Output grid (defaults to the grid of q0)
        normalization_tol: Accepted deviation of the initial integral from 1

    Raises:
        ValidationError: If no output grid can be determined
        NumericalValidationError: If q0 is not normalized against d mu
    """
    if isinstance(q0, QGrid):
        grid = grid or q0
        initial_total = q0.total()
        distribution = _interpolated_distribution(q0)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(
                "Classical transport of sampled data",
                extra={"interpolation_error": interpolation_error_estimate(q0, params, t)}
            )
    else:
        if grid is None:
            raise ValidationError("An output grid is required for functional input", field="grid")
        distribution = q0
        theta, phi = grid.mesh()
        initial_total = float(np.sum(grid.weights * distribution(theta, phi)))

    if abs(initial_total - 1.0) > normalization_tol:
        raise NumericalValidationError(
            f"Initial distribution is not normalized (integral={initial_total!r})",
            check="normalization",
            details={"integral": initial_total, "tolerance": normalization_tol}
        )

    theta, phi = grid.mesh()
    back_theta, back_phi = flow_angles(theta, phi, params, -t)
    return grid.with_values(distribution(back_theta, back_phi))


def qdot_classical(q0: Distribution, params: TopParams, point: PointLike, h: float = 1e-5) -> float:
    """
    dQ/dt at t = 0 under the Liouville flow: -(omega + J cos theta) dQ0/dphi.

    The flow velocity is exact. Q0 is a black-box callable, so dQ0/dphi is a
    central difference of step h with O(h^2) error.
    """
    point = PhasePoint.coerce(point)
    return float(qdot_classical_grid(q0, params, point.theta, point.phi, h))


def qdot_classical_grid(q0: Distribution, params: TopParams, thetas, phis, h: float = 1e-5) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    derivative = (q0(thetas, phis + h) - q0(thetas, phis - h)) / (2 * h)
    return -angular_velocity(thetas, params) * derivative


# ============================================================================
# Quantum/classical studies
# ============================================================================


def _log_log_slope(times: np.ndarray, gaps: np.ndarray) -> float:
    return float(np.polyfit(np.log(times), np.log(gaps), 1)[0])


def short_time_study(
    params: TopParams,
    point0: PointLike,
    times: Sequence[float],
    grid: QGrid,
) -> ShortTimeStudy:
    """
    Compare quantum and classical evolution of |z0> at short times.

    With omega = 0 and an equatorial z0 the first-moment displacement gap is
    second order in t, while the Q-function gap itself is first order.
    """
    spin = params.spin
    s = spin.s
    times = np.asarray(times, dtype=float)
    rho0 = coherent_state(spin, point0).projector()
    q0 = coherent_distribution(spin, point0)

    quantum_start = moments_from_rho(rho0).sminus
    classical_start = classical_moments(evolve_classical(q0, params, 0.0, grid)).sminus

    sup_gaps = np.empty_like(times)
    moment_gaps = np.empty_like(times)
    for index, t in enumerate(times):
        rho_t = evolve_unitary(rho0, params, t)
        quantum_grid = sample_q_function(rho_t, grid)
        classical_grid = evolve_classical(q0, params, t, grid)
        sup_gaps[index] = np.max(np.abs(quantum_grid.values - classical_grid.values))
        quantum_shift = moments_from_rho(rho_t).sminus - quantum_start
        classical_shift = classical_moments(classical_grid).sminus - classical_start
        moment_gaps[index] = abs(quantum_shift - classical_shift) / s

    study = ShortTimeStudy(
        times=times,
        sup_gaps=sup_gaps,
        moment_gaps=moment_gaps,
        sup_slope=_log_log_slope(times, sup_gaps),
        moment_slope=_log_log_slope(times, moment_gaps),
    )
    logger.debug(
        "Short-time study finished",
        extra={"sup_slope": study.sup_slope, "moment_slope": study.moment_slope}
    )
    return study


def sminus_gap(params: TopParams, point0: PointLike, t: float, grid: QGrid) -> float:
    """|<S->_quantum / s - E(S-)_classical / s| for matched coherent data at time t."""
    spin = params.spin
    rho_t = evolve_unitary(coherent_state(spin, point0).projector(), params, t)
    classical_grid = evolve_classical(coherent_distribution(spin, point0), params, t, grid)
    quantum = moments_from_rho(rho_t).sminus
    classical = classical_moments(classical_grid).sminus
    return abs(quantum - classical) / spin.s
