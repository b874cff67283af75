"""
Business logic for phase-space simulations.

This module contains the service layer shared by the CLI and the HTTP API.
It turns validated requests into physics calls, summarizes the resulting
grids, and maps unexpected failures onto the exception hierarchy.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from spintop.config import Settings, get_settings
from spintop.constants import EvolutionMode
from spintop.exceptions import GridMismatchError, NumericalValidationError, SpinTopError
from spintop.monitoring.metrics import timeit
from spintop.physics.classical_top import coherent_distribution, evolve_classical
from spintop.physics.decoherence import DephasingParams, evolve_dephasing, long_time_correspondence
from spintop.physics.quantum_top import TopParams, evolve_unitary
from spintop.physics.spin_core import (
    PhasePoint,
    QGrid,
    coherent_state,
    make_grid,
    moments_from_q,
    sample_q_coherent,
    sample_q_function,
)
from spintop.schemas.common import ComplexValue, GridSpec, TopParamsSchema, point_from_complex
from spintop.schemas.simulation import (
    CompareRequest,
    ComparisonReport,
    DephaseReport,
    DephaseRequest,
    EvolveRequest,
    EvolveResponse,
    DivergenceReport,
    PanelSummary,
)
from spintop.utils.logger import get_logger, log_exception

# Get logger for this module
logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DivergenceResult:
    """Grids of the three panels plus their report."""

    initial: QGrid
    classical: QGrid
    quantum: QGrid
    report: DivergenceReport


def concentration(grid: QGrid) -> float:
    """|int Q e^{i phi}| / int Q: 1 for a point mass in phi, 0 for a uniform ring."""
    return float(abs(np.sum(grid.phi_marginal() * np.exp(1j * grid.phis))) / grid.total())


def _panel(name: str, grid: QGrid) -> PanelSummary:
    index = np.unravel_index(int(np.argmax(grid.values)), grid.shape)
    point = PhasePoint(grid.thetas[index[0]], grid.phis[index[1]])
    return PanelSummary(
        name=name,
        max_value=float(grid.values[index]),
        argmax_z=ComplexValue.of(point.z),
        max_ring_peak=float(np.max(np.max(grid.values, axis=1))),
        concentration=concentration(grid),
    )


class SimulationService:
    """
    Service class for simulations.

    Handles evolution under the three dynamics, quantum/classical
    comparisons, the divergence study and the dephasing correspondence.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """Initialize the service with the runtime settings."""
        self.settings = settings or get_settings()

    # ------------------------------------------------------------------
    # Evolution
    # ------------------------------------------------------------------

    @timeit("evolve")
    def evolve(self, request: EvolveRequest) -> QGrid:
        """
        Evolve |z0> and sample the result on the requested grid.

        Args:
            request: Validated evolution request

        Returns:
            Grid holding Q (quantum, dephasing) or the transported
            distribution (classical) at time t

        Raises:
            SpinTopError: On invalid input or a failed numerical check
        """
        try:
            logger.info(
                f"Simulation: Evolving mode={request.mode.value} s={request.s} t={request.t}",
                extra={"n_theta": request.n_theta, "n_phi": request.n_phi}
            )
            params = request.to_params()
            grid = make_grid(params.spin, request.n_theta, request.n_phi)
            point0 = point_from_complex(request.z0)

            if request.mode == EvolutionMode.CLASSICAL:
                result = evolve_classical(
                    coherent_distribution(params.spin, point0),
                    params,
                    request.t,
                    grid,
                    normalization_tol=self.settings.CLASSICAL_NORMALIZATION_TOL,
                )
            else:
                rho0 = coherent_state(params.spin, point0).projector()
                if request.mode == EvolutionMode.DEPHASING:
                    rho_t = evolve_dephasing(rho0, DephasingParams(request.gamma, params), request.t)
                else:
                    rho_t = evolve_unitary(rho0, params, request.t)
                result = sample_q_function(rho_t, grid)

            logger.info("Evolution finished", extra={"total": result.total()})
            return result

        except SpinTopError as e:
            logger.warning(f"Evolution rejected: {e.message}")
            raise

        except Exception as e:
            log_exception(logger, "Unexpected error during evolution", error=str(e))
            raise NumericalValidationError(
                message="An unexpected error occurred during evolution",
                check="evolve",
                details={"error": str(e)}
            )

    def summarize(self, grid: QGrid, request: EvolveRequest) -> EvolveResponse:
        """Build the API summary of an evolved grid."""
        index = np.unravel_index(int(np.argmax(grid.values)), grid.shape)
        return EvolveResponse(
            mode=request.mode,
            s=request.s,
            t=request.t,
            n_theta=grid.n_theta,
            n_phi=grid.n_phi,
            total=grid.total(),
            max_value=float(grid.values[index]),
            argmax=(float(grid.thetas[index[0]]), float(grid.phis[index[1]])),
            theta_marginal=grid.theta_marginal().tolist(),
            values=grid.values.tolist() if request.include_values else None,
        )

    # ------------------------------------------------------------------
    # Comparison
    # ------------------------------------------------------------------

    def compare_grids(self, a: QGrid, b: QGrid, times: Sequence[float] = ()) -> ComparisonReport:
        """
        Discrepancy metrics between two grids on identical nodes.

        Moment gaps use the quantum symbol kernels and are reported only when
        the grid integrates them exactly.

        Raises:
            GridMismatchError: If the grids differ in spin, nodes or weights
        """
        if not a.same_nodes(b):
            raise GridMismatchError(
                "Grids do not share nodes and weights",
                details={"shape_a": list(a.shape), "shape_b": list(b.shape)}
            )

        difference = np.abs(a.values - b.values)
        moment_gaps = {}
        if a.is_exact_for():
            moments_a = moments_from_q(a).as_dict()
            moments_b = moments_from_q(b).as_dict()
            moment_gaps = {name: float(abs(moments_a[name] - moments_b[name])) for name in moments_a}

        return ComparisonReport(
            l1=float(np.sum(a.weights * difference)),
            sup=float(np.max(difference)),
            moment_gaps=moment_gaps,
            times=[float(t) for t in times],
        )

    def _quantum_and_classical(self, params: TopParams, point0: PhasePoint, t: float, grid: QGrid):
        rho_t = evolve_unitary(coherent_state(params.spin, point0).projector(), params, t)
        quantum = sample_q_function(rho_t, grid)
        classical = evolve_classical(
            coherent_distribution(params.spin, point0),
            params,
            t,
            grid,
            normalization_tol=self.settings.CLASSICAL_NORMALIZATION_TOL,
        )
        return quantum, classical

    @timeit("compare_dynamics")
    def compare(self, request: CompareRequest) -> ComparisonReport:
        """
        Compare quantum and classical evolution of the same coherent data.

        Raises:
            SpinTopError: On invalid input or a failed numerical check
        """
        try:
            logger.info(f"Simulation: Comparing dynamics s={request.s} t={request.t}")
            params = request.to_params()
            grid = make_grid(params.spin, request.n_theta, request.n_phi)
            quantum, classical = self._quantum_and_classical(
                params, point_from_complex(request.z0), request.t, grid
            )
            report = self.compare_grids(quantum, classical, times=[request.t])
            logger.info("Comparison finished", extra={"l1": report.l1, "sup": report.sup})
            return report

        except SpinTopError as e:
            logger.warning(f"Comparison rejected: {e.message}")
            raise

        except Exception as e:
            log_exception(logger, "Unexpected error during comparison", error=str(e))
            raise NumericalValidationError(
                message="An unexpected error occurred during comparison",
                check="compare",
                details={"error": str(e)}
            )

    @timeit("divergence")
    def divergence(self, top: Optional[TopParamsSchema] = None, grid_spec: Optional[GridSpec] = None) -> DivergenceResult:
        """
        Initial |z = 1>, classical and quantum distributions at t = 2 pi / J.

        Args:
            top: Top parameters (defaults to s = 1, omega = 0, J = 1)
            grid_spec: Grid dimensions (defaults from settings)

        Returns:
            Panels a (initial), b (classical) and c (quantum) with their report
        """
        top = top or TopParamsSchema()
        grid_spec = grid_spec or GridSpec()
        try:
            params = top.to_params()
            if params.J == 0.0:
                raise NumericalValidationError("The divergence study needs J != 0", check="J")
            t = 2.0 * np.pi / params.J
            logger.info(f"Simulation: Divergence study s={top.s} t={t}")

            grid = make_grid(params.spin, grid_spec.n_theta, grid_spec.n_phi)
            point0 = PhasePoint.from_z(1.0)
            initial = sample_q_coherent(grid, point0)
            quantum, classical = self._quantum_and_classical(params, point0, t, grid)
            revival = sample_q_coherent(grid, point0.negated())

            report = DivergenceReport(
                t=t,
                panels=[_panel("initial", initial), _panel("classical", classical), _panel("quantum", quantum)],
                comparison=self.compare_grids(quantum, classical, times=[t]),
                revival_error=float(np.max(np.abs(quantum.values - revival.values))),
            )
            logger.info("Divergence study finished", extra={"l1": report.comparison.l1})
            return DivergenceResult(initial=initial, classical=classical, quantum=quantum, report=report)

        except SpinTopError as e:
            logger.warning(f"Divergence study rejected: {e.message}")
            raise

        except Exception as e:
            log_exception(logger, "Unexpected error during divergence study", error=str(e))
            raise NumericalValidationError(
                message="An unexpected error occurred during the divergence study",
                check="divergence",
                details={"error": str(e)}
            )

    # ------------------------------------------------------------------
    # Dephasing
    # ------------------------------------------------------------------

    @timeit("dephase")
    def dephase(self, request: DephaseRequest) -> DephaseReport:
        """
        Long-time correspondence between dephased quantum and phase-diffused
        classical evolution of |z0>.
        """
        try:
            logger.info(f"Simulation: Dephasing s={request.s} gamma={request.gamma} t={request.t}")
            params = request.to_params()
            grid = make_grid(params.spin, request.n_theta, request.n_phi)
            result = long_time_correspondence(
                point_from_complex(request.z0),
                DephasingParams(request.gamma, params),
                request.t,
                grid,
            )
            report = DephaseReport(
                gamma_t=result.gamma_t,
                phi_dependence=result.phi_dependence,
                initial_marginal_gap=result.initial_marginal_gap,
                classical_marginal_gap=result.classical_marginal_gap,
                sup_gap=result.sup_gap,
            )
            logger.info("Dephasing report finished", extra={"sup_gap": report.sup_gap})
            return report

        except SpinTopError as e:
            logger.warning(f"Dephasing rejected: {e.message}")
            raise

        except Exception as e:
            log_exception(logger, "Unexpected error during dephasing", error=str(e))
            raise NumericalValidationError(
                message="An unexpected error occurred during dephasing",
                check="dephase",
                details={"error": str(e)}
            )
