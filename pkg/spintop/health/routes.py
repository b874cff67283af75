"""
Health check API endpoints.

Provides endpoints for liveness, readiness, and detailed health checks.
"""

from fastapi import APIRouter, status
from fastapi.responses import JSONResponse

from spintop.health.checks import is_healthy, run_health_checks
from spintop.health.models import HealthCheckResponse
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

router = APIRouter(prefix="/health", tags=["Health Checks"])


@router.get(
    "/live",
    status_code=status.HTTP_200_OK,
    summary="Liveness Probe",
    description="Returns 200 if the application is running."
)
async def liveness_check() -> dict:
    """
    Liveness check endpoint.

    Always returns 200 OK while the process serves requests.
    """
    return {
        "status": "alive"
    }


@router.get(
    "/ready",
    status_code=status.HTTP_200_OK,
    summary="Readiness Probe",
    description="Returns 200 if the numerical self-check passes, 503 if not."
)
async def readiness_check() -> JSONResponse:
    """
    Readiness check endpoint.

    Returns:
        JSONResponse with 200 if ready, 503 if the self-check fails
    """
    if is_healthy():
        return JSONResponse(
            status_code=status.HTTP_200_OK,
            content={"status": "ready"}
        )
    logger.warning("Readiness check failed - numerical self-check unhealthy")
    return JSONResponse(
        status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
        content={
            "status": "not_ready",
            "reason": "Numerical self-check failed"
        }
    )


@router.get(
    "",
    response_model=HealthCheckResponse,
    status_code=status.HTTP_200_OK,
    summary="Detailed Health Check",
    description="Returns detailed health status with uptime and check measurements."
)
async def health_check() -> JSONResponse:
    """
    Detailed health check endpoint.

    Status Codes:
        - 200: All checks healthy
        - 503: One or more checks unhealthy
    """
    health_response = run_health_checks()
    status_code = (
        status.HTTP_200_OK if health_response.status == "healthy"
        else status.HTTP_503_SERVICE_UNAVAILABLE
    )
    return JSONResponse(
        status_code=status_code,
        content=health_response.model_dump(mode="json")
    )
