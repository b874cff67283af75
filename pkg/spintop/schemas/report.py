"""
Pydantic schemas for the kernel scan and the NMR reports.
"""

from typing import Any, Dict, List

from pydantic import BaseModel, Field, field_validator

from spintop.config import get_settings
from spintop.constants import API_CONSTANTS, QUBIT_LIMITS
from spintop.schemas.common import ComplexValue, TopParamsSchema


class ScanRequest(TopParamsSchema):
    """
    Schema for a seeded scan of the bilinear propagator kernel.

    Attributes:
        t: Evolution time
        n_samples: Number of random (z, z1, z2) triples
        seed: Seed of numpy.random.default_rng
    """

    t: float
    n_samples: int = API_CONSTANTS.DEFAULT_SCAN_SAMPLES
    seed: int = 0

    @field_validator("n_samples")
    @classmethod
    def validate_samples(cls, v: int) -> int:
        max_samples = get_settings().SCAN_MAX_SAMPLES
        if v < 1 or v > max_samples:
            raise ValueError(f"n_samples must lie in [1, {max_samples}]")
        return v

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if v < 0:
            raise ValueError("seed must be >= 0")
        return v


class WitnessSchema(BaseModel):
    """A sampled triple and its kernel value."""

    z: ComplexValue
    z1: ComplexValue
    z2: ComplexValue
    value: ComplexValue


class KernelScanResponse(BaseModel):
    """
    Result of a kernel scan.

    Attributes:
        min_real: Smallest real part over the triples
        max_abs_imag: Largest |imaginary part| over the triples
        witness_points: Triples with the largest |imag|, then the min-real one
        n_samples: Number of triples
        seed: Sampling seed
        t: Evolution time
        diagonal_min_real: Smallest value of the diagonal kernel K
        diagonal_max_abs_imag: Largest |imag| of the diagonal kernel
    """

    min_real: float
    max_abs_imag: float
    witness_points: List[WitnessSchema]
    n_samples: int
    seed: int
    t: float
    diagonal_min_real: float
    diagonal_max_abs_imag: float


class DecayReport(BaseModel):
    """
    Signal of n qubits after g pseudo-pure preparation rounds.

    Attributes:
        n: Qubit count
        g: Number of rounds
        value: (1 + 2^{2n-1})^{-g}
        log10: log10 of value
    """

    n: int = Field(ge=1)
    g: float = Field(ge=0.0)
    value: float
    log10: float


class BellReport(BaseModel):
    """
    Output of the Bell pulse sequence applied to |00>.

    Attributes:
        fidelity: Overlap with (|00> + |11>)/sqrt(2)
        entangled: PPT verdict for the output
        min_partial_transpose_eigenvalue: Smallest eigenvalue of the partial transpose
        amplitudes: Output amplitudes in |00>, |01>, |10>, |11> order
        sequence: Pulse terms in application order
        global_phase: Phase applied after the pulses
    """

    fidelity: float
    entangled: bool
    min_partial_transpose_eigenvalue: float
    amplitudes: List[ComplexValue]
    sequence: List[Dict[str, Any]]
    global_phase: float


class GhzReport(BaseModel):
    """
    Output of the Hadamard + CNOT cascade on n qubits.

    Attributes:
        n: Qubit count
        norm: Norm of the output
        nonzero_indices: Basis indices with nonzero amplitude
        amplitudes: Amplitudes at those indices
    """

    n: int = Field(ge=QUBIT_LIMITS.MIN_QUBITS, le=QUBIT_LIMITS.MAX_QUBITS)
    norm: float
    nonzero_indices: List[int]
    amplitudes: List[ComplexValue]
