"""
Pydantic schemas for phase-space simulations.

- EvolveRequest / EvolveResponse: evolve a coherent state with one dynamics
- CompareRequest / ComparisonReport: quantum vs classical discrepancy
- DivergenceReport: the three-panel divergence study at t = 2 pi / J
- DephaseRequest / DephaseReport: long-time dephasing correspondence
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from spintop.constants import EvolutionMode
from spintop.schemas.common import ComplexValue, GridSpec, TopParamsSchema


class EvolveRequest(TopParamsSchema, GridSpec):
    """
    Schema for evolving |z0> to time t.

    Attributes:
        mode: quantum, classical or dephasing
        z0: Stereographic label of the initial coherent state
        t: Evolution time (>= 0)
        gamma: Dephasing rate; required for, and only accepted with, dephasing
        include_values: Return the full grid of Q values

    Validation:
        - gamma must be omitted unless mode is dephasing
        - the grid must be exact for the spin
    """

    mode: EvolutionMode = EvolutionMode.QUANTUM
    z0: ComplexValue = Field(default_factory=lambda: ComplexValue(re=1.0))
    t: float = 0.0
    gamma: Optional[float] = None
    include_values: bool = False

    @field_validator("t")
    @classmethod
    def validate_time(cls, v: float) -> float:
        if v < 0:
            raise ValueError("t must be >= 0")
        return v

    @field_validator("gamma")
    @classmethod
    def validate_gamma(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError("gamma must be >= 0")
        return v

    @model_validator(mode="after")
    def validate_mode_flags(self) -> "EvolveRequest":
        """gamma belongs to dephasing mode only."""
        if self.mode == EvolutionMode.DEPHASING and self.gamma is None:
            raise ValueError("gamma is required with mode=dephasing")
        if self.mode != EvolutionMode.DEPHASING and self.gamma is not None:
            raise ValueError(f"gamma is not accepted with mode={self.mode.value}")
        self.check_resolution(self.spin)
        return self


class EvolveResponse(BaseModel):
    """
    Summary of an evolved distribution.

    Attributes:
        mode: Dynamics used
        s: Spin label
        t: Evolution time
        n_theta: Polar node count
        n_phi: Azimuthal node count
        total: Integral of Q against d mu
        max_value: Largest sampled value
        argmax: (theta, phi) of the largest sampled value
        theta_marginal: Probability per theta ring
        values: Full value grid, theta-major (only when requested)
    """

    mode: EvolutionMode
    s: str
    t: float
    n_theta: int
    n_phi: int
    total: float
    max_value: float
    argmax: Tuple[float, float]
    theta_marginal: List[float]
    values: Optional[List[List[float]]] = None


class CompareRequest(TopParamsSchema, GridSpec):
    """
    Schema for comparing quantum and classical evolution of |z0>.

    Attributes:
        z0: Initial coherent-state label
        t: Evolution time (>= 0)
    """

    z0: ComplexValue = Field(default_factory=lambda: ComplexValue(re=1.0))
    t: float

    @field_validator("t")
    @classmethod
    def validate_time(cls, v: float) -> float:
        if v < 0:
            raise ValueError("t must be >= 0")
        return v

    @model_validator(mode="after")
    def validate_grid(self) -> "CompareRequest":
        self.check_resolution(self.spin)
        return self


class ComparisonReport(BaseModel):
    """
    Discrepancy between two distributions on the same grid.

    Attributes:
        l1: Integral of |Q_a - Q_b| against d mu (0 <= l1 <= 2 for densities)
        sup: Largest pointwise difference
        moment_gaps: |difference| per quantum moment (Sz, Sminus, Sz2, Sminus2);
            empty when the grid is not exact for the spin
        times: Times the two grids were taken at, when known
    """

    l1: float = Field(ge=0.0)
    sup: float = Field(ge=0.0)
    moment_gaps: Dict[str, float] = Field(default_factory=dict)
    times: List[float] = Field(default_factory=list)


class PanelSummary(BaseModel):
    """Peak statistics of one panel of the divergence study."""

    name: str
    max_value: float
    argmax_z: ComplexValue
    max_ring_peak: float
    concentration: float


class DivergenceReport(BaseModel):
    """
    Divergence of classical and quantum evolution of |z = 1> at t = 2 pi / J.

    Attributes:
        t: Time of panels b and c
        panels: Summaries of the initial, classical and quantum panels
        comparison: Quantum vs classical discrepancy at t
        revival_error: sup |Q_quantum - Q_{|-1>}|
    """

    t: float
    panels: List[PanelSummary]
    comparison: ComparisonReport
    revival_error: float


class DephaseRequest(TopParamsSchema, GridSpec):
    """
    Schema for the long-time dephasing correspondence.

    Attributes:
        gamma: Dephasing rate (>= 0)
        t: Evolution time (>= 0)
        z0: Initial coherent-state label
    """

    gamma: float = Field(ge=0.0)
    t: float = Field(ge=0.0)
    z0: ComplexValue = Field(default_factory=lambda: ComplexValue(re=1.0))

    @model_validator(mode="after")
    def validate_grid(self) -> "DephaseRequest":
        self.check_resolution(self.spin)
        return self


class DephaseReport(BaseModel):
    """
    Dephased quantum Q against phase-diffused classical Q.

    Attributes:
        gamma_t: Dimensionless dephasing strength
        phi_dependence: Largest deviation of quantum Q from its azimuthal average
        initial_marginal_gap: Theta-marginal drift of quantum Q since t = 0
        classical_marginal_gap: Theta-marginal gap, quantum vs classical
        sup_gap: Sup gap to the azimuthally averaged classical Q
    """

    gamma_t: float
    phi_dependence: float
    initial_marginal_gap: float
    classical_marginal_gap: float
    sup_gap: float
