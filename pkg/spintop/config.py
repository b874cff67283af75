"""
Runtime configuration management.

This module handles loading and validating configuration from environment variables.
Uses Pydantic BaseSettings for type-safe configuration with validation.
"""

from pathlib import Path
from typing import List, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings
from dotenv import load_dotenv


# Load environment variables from .env file if it exists
load_dotenv()


class Settings(BaseSettings):
    """
    Simulator settings loaded from environment variables.

    Numerical defaults (grid sizes, limits) live here so that the CLI and
    the HTTP API resolve them identically.
    """

    # Logging configuration
    LOG_LEVEL: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    USE_JSON_LOGS: bool = Field(
        default=True,
        description="Use JSON formatting for logs"
    )

    LOG_FILE: Optional[str] = Field(
        default=None,
        description="Optional path of a rotating JSON log file"
    )

    # Application metadata
    APP_NAME: str = Field(
        default="Spin Top Simulator",
        description="Application name for logging and documentation"
    )

    API_VERSION: str = Field(
        default="0.1.0",
        description="API and manifest version string"
    )

    API_DESCRIPTION: str = Field(
        default="Classical versus quantum dynamics of the nonlinear top on spherical phase space",
        description="API description for documentation"
    )

    DEBUG: bool = Field(
        default=False,
        description="Enable debug mode (more verbose logging, detailed errors)"
    )

    # CORS configuration
    ALLOWED_ORIGINS: str = Field(
        default="*",
        description="Comma-separated list of allowed CORS origins"
    )

    # Numerical defaults
    DEFAULT_GRID_THETA: int = Field(
        default=64,
        description="Default number of Gauss-Legendre nodes in cos(theta)"
    )

    DEFAULT_GRID_PHI: int = Field(
        default=128,
        description="Default number of uniform azimuthal nodes"
    )

    MAX_TWO_S: int = Field(
        default=600,
        description="Largest accepted value of 2s"
    )

    MAX_GRID_NODES: int = Field(
        default=1_000_000,
        description="Largest accepted n_theta * n_phi"
    )

    SCAN_MAX_SAMPLES: int = Field(
        default=1_000_000,
        description="Largest accepted sample count for kernel scans"
    )

    CLASSICAL_NORMALIZATION_TOL: float = Field(
        default=1e-6,
        description="Tolerance on the integral of a classical input distribution"
    )

    # Rate limiting
    RATE_LIMIT_COMPUTE: str = Field(
        default="30/minute",
        description="Rate limit for compute-heavy endpoints"
    )

    RATE_LIMIT_READ: str = Field(
        default="120/minute",
        description="Rate limit for cheap report endpoints"
    )

    # Monitoring
    SLOW_OPERATION_MS: float = Field(
        default=1000.0,
        description="Duration above which a timed operation is logged as slow"
    )

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """
        Validate that LOG_LEVEL is a valid logging level.

        Args:
            v: The log level string

        Returns:
            The validated log level in uppercase

        Raises:
            ValueError: If LOG_LEVEL is not a valid level
        """
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        v_upper = v.upper()

        if v_upper not in valid_levels:
            raise ValueError(
                f"LOG_LEVEL must be one of {valid_levels}, got '{v}'"
            )

        return v_upper

    @field_validator("DEFAULT_GRID_THETA", "DEFAULT_GRID_PHI")
    @classmethod
    def validate_grid_size(cls, v: int) -> int:
        """Grid defaults must describe a non-empty grid."""
        if v < 2:
            raise ValueError(f"Grid dimensions must be at least 2, got {v}")
        return v

    def get_allowed_origins(self) -> List[str]:
        """
        Parse ALLOWED_ORIGINS into a list.

        Returns:
            List of allowed origin URLs
        """
        if self.ALLOWED_ORIGINS == "*":
            return ["*"]
        return [origin.strip() for origin in self.ALLOWED_ORIGINS.split(",")]

    def validate_config(self) -> None:
        """
        Validate configuration on startup.

        Raises:
            ValueError: If configuration is invalid
        """
        if self.LOG_FILE:
            Path(self.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)

        if self.DEBUG:
            print("WARNING: DEBUG mode is enabled - not recommended for production")

        if self.MAX_TWO_S < 1:
            raise ValueError("MAX_TWO_S must be at least 1")

        if self.DEFAULT_GRID_THETA * self.DEFAULT_GRID_PHI > self.MAX_GRID_NODES:
            raise ValueError("Default grid exceeds MAX_GRID_NODES")

    def log_config(self) -> dict:
        """
        Get configuration as dict for logging.

        Returns:
            Configuration dictionary
        """
        return {
            "app_name": self.APP_NAME,
            "api_version": self.API_VERSION,
            "debug": self.DEBUG,
            "log_level": self.LOG_LEVEL,
            "use_json_logs": self.USE_JSON_LOGS,
            "log_file": self.LOG_FILE,
            "default_grid": f"{self.DEFAULT_GRID_THETA}x{self.DEFAULT_GRID_PHI}",
            "max_two_s": self.MAX_TWO_S,
            "scan_max_samples": self.SCAN_MAX_SAMPLES,
            "allowed_origins": self.get_allowed_origins(),
        }

    class Config:
        """Pydantic configuration."""
        case_sensitive = True
        env_file = ".env"
        env_file_encoding = "utf-8"


# Global settings instance
try:
    settings = Settings()
except Exception as e:
    print(f"ERROR: Failed to load application settings: {e}")
    raise


def get_settings() -> Settings:
    """
    Get the global settings instance.

    Returns:
        The application settings object
    """
    return settings
