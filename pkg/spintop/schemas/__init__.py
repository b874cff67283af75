"""
Pydantic schemas for request/response validation.

This package contains Pydantic models used for:
- Request body validation
- Response serialization
- Report payloads shared by the CLI and the HTTP API
"""

from spintop.schemas.common import ComplexValue, GridSpec, RunManifest, TopParamsSchema
from spintop.schemas.report import (
    BellReport,
    DecayReport,
    GhzReport,
    KernelScanResponse,
    ScanRequest,
    WitnessSchema,
)
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

__all__ = [
    "ComplexValue",
    "GridSpec",
    "RunManifest",
    "TopParamsSchema",
    "BellReport",
    "DecayReport",
    "GhzReport",
    "KernelScanResponse",
    "ScanRequest",
    "WitnessSchema",
    "CompareRequest",
    "ComparisonReport",
    "DephaseReport",
    "DephaseRequest",
    "EvolveRequest",
    "EvolveResponse",
    "DivergenceReport",
    "PanelSummary",
]
