"""
API endpoints for phase-space simulations.

- POST /evolve - Evolve a coherent state under one dynamics
- POST /compare-dynamics - Quantum vs classical discrepancy
- POST /dephase - Long-time dephasing correspondence

Domain errors propagate to the application exception handlers.
"""

from fastapi import APIRouter, Request, status
from slowapi import Limiter
from slowapi.util import get_remote_address

from spintop.config import get_settings
from spintop.constants import API_CONSTANTS
from spintop.exceptions import ValidationError
from spintop.schemas.common import GridSpec
from spintop.schemas.simulation import (
    CompareRequest,
    ComparisonReport,
    DephaseReport,
    DephaseRequest,
    EvolveRequest,
    EvolveResponse,
)
from spintop.services.simulation_service import SimulationService
from spintop.utils.logger import get_logger

# Initialize router and logger
router = APIRouter(tags=["Simulations"])
logger = get_logger(__name__)
limiter = Limiter(key_func=get_remote_address)
settings = get_settings()


def _check_api_grid(grid: GridSpec) -> None:
    """Reject grids above the HTTP node cap; the CLI is bounded by settings only."""
    nodes = grid.n_theta * grid.n_phi
    if nodes > API_CONSTANTS.MAX_API_GRID_NODES:
        raise ValidationError(
            f"Grid has {nodes} nodes, the API accepts at most {API_CONSTANTS.MAX_API_GRID_NODES}",
            field="grid",
            details={"n_theta": grid.n_theta, "n_phi": grid.n_phi}
        )


@router.post(
    "/evolve",
    response_model=EvolveResponse,
    status_code=status.HTTP_200_OK,
    summary="Evolve a coherent state"
)
@limiter.limit(settings.RATE_LIMIT_COMPUTE)
def evolve(request: Request, payload: EvolveRequest) -> EvolveResponse:
    """
    Evolve |z0> with quantum, classical or dephasing dynamics.

    Args:
        payload: Evolution parameters; include_values returns the full grid

    Returns:
        Summary of the evolved distribution

    Raises:
        ValidationError (400): Invalid parameters
        NumericalValidationError (422): Failed numerical check
    """
    logger.info(f"API: Evolve mode={payload.mode.value} s={payload.s}")
    _check_api_grid(payload)
    service = SimulationService()
    grid = service.evolve(payload)
    return service.summarize(grid, payload)


@router.post(
    "/compare-dynamics",
    response_model=ComparisonReport,
    status_code=status.HTTP_200_OK,
    summary="Compare quantum and classical evolution"
)
@limiter.limit(settings.RATE_LIMIT_COMPUTE)
def compare_dynamics(request: Request, payload: CompareRequest) -> ComparisonReport:
    """
    l1, sup and moment gaps between quantum and classical evolution of |z0>.
    """
    logger.info(f"API: Compare dynamics s={payload.s} t={payload.t}")
    _check_api_grid(payload)
    return SimulationService().compare(payload)


@router.post(
    "/dephase",
    response_model=DephaseReport,
    status_code=status.HTTP_200_OK,
    summary="Long-time dephasing correspondence"
)
@limiter.limit(settings.RATE_LIMIT_COMPUTE)
def dephase(request: Request, payload: DephaseRequest) -> DephaseReport:
    """
    Dephased quantum Q against azimuthally averaged classical Q.
    """
    logger.info(f"API: Dephase s={payload.s} gamma={payload.gamma} t={payload.t}")
    _check_api_grid(payload)
    return SimulationService().dephase(payload)
