"""
Simulator constants and enums.

This module defines the enums, numerical tolerances and format constants
used throughout the package.
"""

from enum import Enum


# ============================================================================
# ENUMS
# ============================================================================


class EvolutionMode(str, Enum):
    """
    Dynamics used to evolve an initial distribution.

    QUANTUM: exact unitary evolution of the density operator
    CLASSICAL: Liouville transport along the classical characteristics
    DEPHASING: exact solution of the collective dephasing master equation
    """
    QUANTUM = "quantum"
    CLASSICAL = "classical"
    DEPHASING = "dephasing"


class PulseKind(str, Enum):
    """
    Kind of term in a pulse sequence.

    ROT: single-qubit rotation about an axis
    COUPLING: sigma_z sigma_z evolution between two qubits
    """
    ROT = "rot"
    COUPLING = "coupling"


# ============================================================================
# NUMERICAL TOLERANCES
# ============================================================================


class TOLERANCES:
    """
    Tolerances for state validation and numerical identities.
    """

    CLOSED_FORM: float = 1e-12  # Identities with no discretization
    QUADRATURE: float = 1e-9  # Identities backed by the exact quadrature
    EIGENVALUE_FLOOR: float = -1e-10  # Smallest eigenvalue still called positive
    INVERSION: float = 1e-8  # Residual accepted by the Q inversion
    UNIT_VECTOR: float = 1e-12  # Norm tolerance for axes and Bloch vectors
    POLE: float = 1e-9  # Distance in theta from pi treated as the south pole
    CLASSICAL_NORMALIZATION: float = 1e-6  # Integral of classical input data


# ============================================================================
# DOMAIN LIMITS
# ============================================================================


class SPIN_LIMITS:
    """
    Limits on the spin quantum number and grids.
    """

    MIN_TWO_S: int = 1
    THETA_NODES_PER_TWO_S: int = 1  # n_theta >= 2s + 2
    THETA_NODES_OFFSET: int = 2
    PHI_NODES_PER_TWO_S: int = 2  # n_phi >= 4s + 2
    PHI_NODES_OFFSET: int = 2


class QUBIT_LIMITS:
    """
    Limits on multi-qubit registers.
    """

    MIN_QUBITS: int = 2
    MAX_QUBITS: int = 12


# ============================================================================
# CLI AND FILE FORMATS
# ============================================================================


class EXIT_CODES:
    """
    Process exit codes of the command line interface.
    """

    OK: int = 0
    USAGE: int = 2
    NUMERICAL: int = 3
    IO: int = 4


class FILE_FORMATS:
    """
    Constants for the grid CSV, heatmap and manifest outputs.
    """

    CSV_HEADER: str = "theta,phi,re_z,im_z,weight,Q"
    CSV_COLUMNS: int = 6
    FLOAT_FORMAT: str = "%.17g"  # Round-trips IEEE doubles exactly
    PGM_MAX_GRAY: int = 255
    MANIFEST_SUFFIX: str = ".manifest.json"


# ============================================================================
# API CONSTANTS
# ============================================================================


class API_CONSTANTS:
    """
    HTTP API constants.
    """

    MAX_REQUEST_SIZE_BYTES: int = 1_000_000
    DEFAULT_SCAN_SAMPLES: int = 10_000
    MAX_API_GRID_NODES: int = 262_144  # 512 x 512
