"""
API endpoints for the kernel scan and NMR reports.

- POST /scan - Seeded scan of the bilinear propagator kernel
- GET /decay - Signal decay model
- GET /bell - Bell pulse sequence
- GET /ghz - GHZ cascade
"""

from fastapi import APIRouter, Query, Request, status
from slowapi import Limiter
from slowapi.util import get_remote_address

from spintop.config import get_settings
from spintop.schemas.report import BellReport, DecayReport, GhzReport, KernelScanResponse, ScanRequest
from spintop.services.report_service import ReportService
from spintop.utils.logger import get_logger

# Initialize router and logger
router = APIRouter(tags=["Reports"])
logger = get_logger(__name__)
limiter = Limiter(key_func=get_remote_address)
settings = get_settings()


@router.post(
    "/scan",
    response_model=KernelScanResponse,
    status_code=status.HTTP_200_OK,
    summary="Scan the bilinear kernel for non-positivity"
)
@limiter.limit(settings.RATE_LIMIT_COMPUTE)
def scan(request: Request, payload: ScanRequest) -> KernelScanResponse:
    """
    Sample (z, z1, z2) triples with a fixed seed and report the extreme
    kernel values with their witnesses.
    """
    logger.info(f"API: Kernel scan s={payload.s} n_samples={payload.n_samples}")
    return ReportService().scan(payload)


@router.get(
    "/decay",
    response_model=DecayReport,
    summary="Signal decay (1 + 2^{2n-1})^{-g}"
)
@limiter.limit(settings.RATE_LIMIT_READ)
def decay(
    request: Request,
    n: int = Query(..., description="Qubit count"),
    g: float = Query(..., description="Number of preparation rounds")
) -> DecayReport:
    logger.info(f"API: Decay n={n} g={g}")
    return ReportService().decay(n, g)


@router.get(
    "/bell",
    response_model=BellReport,
    summary="Run the Bell pulse sequence"
)
@limiter.limit(settings.RATE_LIMIT_READ)
def bell(request: Request) -> BellReport:
    logger.info("API: Bell sequence")
    return ReportService().bell()


@router.get(
    "/ghz",
    response_model=GhzReport,
    summary="GHZ state from a CNOT cascade"
)
@limiter.limit(settings.RATE_LIMIT_READ)
def ghz(request: Request, n: int = Query(..., description="Qubit count")) -> GhzReport:
    logger.info(f"API: GHZ n={n}")
    return ReportService().ghz(n)
