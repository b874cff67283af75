"""
Shared Pydantic schemas.

- ComplexValue: JSON form of a complex number
- TopParamsSchema: spin and Hamiltonian parameters shared by requests
- GridSpec: quadrature grid dimensions
- RunManifest: provenance record written next to every CLI output
"""

from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from spintop.config import get_settings
from spintop.exceptions import ValidationError as SpinTopValidationError
from spintop.physics.quantum_top import TopParams
from spintop.physics.spin_core import (
    PhasePoint,
    SpinQuantum,
    minimum_phi_nodes,
    minimum_theta_nodes,
)


class ComplexValue(BaseModel):
    """
    Complex number as a {re, im} object.

    Attributes:
        re: Real part
        im: Imaginary part
    """

    re: float
    im: float = 0.0

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class TopParamsSchema(BaseModel):
    """
    Parameters of the top as accepted by requests.

    Attributes:
        s: Spin quantum number, e.g. 1, 0.5 or "3/2"; stored as its label
        omega: Linear precession rate
        J: Twist strength

    Validation:
        - 2s must be a positive integer no larger than MAX_TWO_S
    """

    s: Union[str, float] = "1"
    omega: float = 0.0
    J: float = 1.0

    @field_validator("s", mode="before")
    @classmethod
    def validate_spin(cls, v: Any) -> str:
        """Normalize the spin to its label and enforce the size limit."""
        try:
            spin = SpinQuantum.parse(v)
        except SpinTopValidationError as e:
            raise ValueError(e.message)
        max_two_s = get_settings().MAX_TWO_S
        if spin.two_s > max_two_s:
            raise ValueError(f"2s cannot exceed {max_two_s}")
        return spin.label()

    @property
    def spin(self) -> SpinQuantum:
        return SpinQuantum.parse(self.s)

    def to_params(self) -> TopParams:
        return TopParams(self.omega, self.J, self.spin)


class GridSpec(BaseModel):
    """
    Quadrature grid dimensions.

    Defaults come from DEFAULT_GRID_THETA and DEFAULT_GRID_PHI.
    """

    n_theta: int = Field(default_factory=lambda: get_settings().DEFAULT_GRID_THETA)
    n_phi: int = Field(default_factory=lambda: get_settings().DEFAULT_GRID_PHI)

    @field_validator("n_theta", "n_phi")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Grid dimensions must be at least 2")
        return v

    @model_validator(mode="after")
    def validate_node_count(self) -> "GridSpec":
        max_nodes = get_settings().MAX_GRID_NODES
        if self.n_theta * self.n_phi > max_nodes:
            raise ValueError(f"Grid cannot exceed {max_nodes} nodes")
        return self

    def check_resolution(self, spin: SpinQuantum) -> None:
        """
        Raises:
            ValueError: If the grid is not exact for the spin
        """
        if self.n_theta < minimum_theta_nodes(spin) or self.n_phi < minimum_phi_nodes(spin):
            raise ValueError(
                f"Grid {self.n_theta}x{self.n_phi} is under-resolved for s={spin.label()}: "
                f"need at least {minimum_theta_nodes(spin)}x{minimum_phi_nodes(spin)}"
            )


def point_from_complex(value: ComplexValue) -> PhasePoint:
    return PhasePoint.from_z(value.to_complex())


class RunManifest(BaseModel):
    """
    Provenance of one CLI run.

    Re-running the command with `params` and `seed` reproduces `outputs`
    byte for byte. No timestamps are recorded.

    Attributes:
        command: Subcommand name
        params: Full parameter set of the run
        seed: Seed of any random sampling, if used
        outputs: Paths written by the run, in write order
        version: Package version
    """

    command: str
    params: Dict[str, Any]
    seed: Optional[int] = None
    outputs: List[str] = Field(default_factory=list)
    version: str
