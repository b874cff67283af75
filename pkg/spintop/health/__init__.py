"""Health check package for monitoring application status."""

from spintop.health.routes import router

__all__ = ["router"]
