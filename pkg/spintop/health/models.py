"""
Health check models.

Pydantic models for health check responses.
"""

from datetime import datetime
from typing import Dict, Optional

from pydantic import BaseModel, Field


class HealthCheck(BaseModel):
    """
    Individual health check result.
    """

    status: str = Field(
        description="Status of the check (healthy, unhealthy)"
    )
    latency_ms: Optional[float] = Field(
        default=None,
        description="Duration of the check in milliseconds"
    )
    error: Optional[str] = Field(
        default=None,
        description="Error message if the check failed"
    )
    details: Optional[Dict] = Field(
        default=None,
        description="Check-specific measurements"
    )


class HealthCheckResponse(BaseModel):
    """
    Aggregated health of the service.
    """

    status: str = Field(
        description="Overall health status (healthy, unhealthy)"
    )
    timestamp: datetime = Field(
        description="When the health check was performed"
    )
    uptime_seconds: float = Field(
        description="Application uptime in seconds"
    )
    version: str = Field(
        description="Application version"
    )
    checks: Dict[str, HealthCheck] = Field(
        description="Individual check results"
    )
