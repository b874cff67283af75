"""
Nonlinear top simulator.

Evolves a spin-s top (two coupled spin-half systems at s=1) under the exact
quantum dynamics and under the classical Liouville flow, and compares the
two on spherical phase space through Husimi Q-functions.
"""

__version__ = "0.1.0"
