"""
Numerical library of the simulator.

Modules are pure functions over immutable domain types and carry no I/O:
spin_core (states, grids, moments), quantum_top and classical_top (the two
dynamics), propagators (coherent-state kernels), decoherence (collective
dephasing) and nmr_gates (the two-qubit gate layer).
"""
