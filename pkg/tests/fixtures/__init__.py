"""
Test fixtures package.

Exports all fixture factory functions for easy import in tests.
"""

from tests.fixtures.states import (
    create_coherent_projector,
    create_random_pure_state,
    create_test_density_matrix,
    create_test_grid,
)

__all__ = [
    "create_coherent_projector",
    "create_random_pure_state",
    "create_test_density_matrix",
    "create_test_grid",
]
