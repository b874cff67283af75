"""
Utility modules for the simulator.

This package contains helper functions used across the package.
"""
