"""
Health check implementations.

The service has no external dependencies, so readiness means the numerical
stack works: the quadrature grid resolves the identity and a coherent state
normalizes against it.
"""

import time
from datetime import datetime, timezone

import numpy as np

from spintop.config import get_settings
from spintop.constants import TOLERANCES
from spintop.health.models import HealthCheck, HealthCheckResponse
from spintop.physics.spin_core import (
    SpinQuantum,
    make_grid,
    minimum_phi_nodes,
    minimum_theta_nodes,
    resolution_of_identity,
    sample_q_coherent,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

# Track application start time for uptime calculation
APP_START_TIME = time.time()


def get_numerics_health() -> HealthCheck:
    """
    Run the s = 1 self-check.

    Returns:
        HealthCheck with the measured deviations
    """
    start_time = time.perf_counter()
    try:
        spin = SpinQuantum(2)
        grid = make_grid(spin, minimum_theta_nodes(spin), minimum_phi_nodes(spin))
        identity_error = float(np.max(np.abs(resolution_of_identity(grid) - np.eye(spin.dim))))
        normalization_error = abs(sample_q_coherent(grid, 1.0).total() - 1.0)
        latency_ms = (time.perf_counter() - start_time) * 1000

        healthy = max(identity_error, normalization_error) <= TOLERANCES.QUADRATURE
        if not healthy:
            logger.error(
                "Numerical self-check failed",
                extra={"identity_error": identity_error, "normalization_error": normalization_error}
            )
        return HealthCheck(
            status="healthy" if healthy else "unhealthy",
            latency_ms=round(latency_ms, 2),
            details={"identity_error": identity_error, "normalization_error": normalization_error}
        )

    except Exception as e:
        logger.error(f"Numerical self-check raised: {str(e)}", exc_info=True)
        return HealthCheck(status="unhealthy", error=str(e))


def run_health_checks() -> HealthCheckResponse:
    """
    Run all health checks and aggregate results.

    Returns:
        HealthCheckResponse, unhealthy if any check is
    """
    checks = {"numerics": get_numerics_health()}
    overall_status = "healthy" if all(c.status == "healthy" for c in checks.values()) else "unhealthy"

    response = HealthCheckResponse(
        status=overall_status,
        timestamp=datetime.now(timezone.utc),
        uptime_seconds=round(time.time() - APP_START_TIME, 2),
        version=get_settings().API_VERSION,
        checks=checks
    )
    if overall_status != "healthy":
        logger.warning(
            f"Health check status: {overall_status}",
            extra={"checks": {name: check.model_dump() for name, check in checks.items()}}
        )
    return response


def is_healthy() -> bool:
    """Quick readiness test."""
    try:
        return get_numerics_health().status == "healthy"
    except Exception as e:
        logger.error(f"Health check failed: {str(e)}")
        return False
