"""
Service layer for simulations and reports.

Services coordinate between the CLI or the API endpoints and the physics
library: they validate, log, time and convert results to schemas.
"""

from spintop.services.report_service import ReportService
from spintop.services.simulation_service import SimulationService

__all__ = ["ReportService", "SimulationService"]
