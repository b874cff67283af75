"""
Coherent-state propagators of the quantum top.

L(z, z1; t) = <z|U(t)|z1> is the amplitude propagator. Q evolves with the
bilinear kernel L(z,z1;t) conj(L(z,z2;t)) integrated against <z1|rho0|z2>;
its diagonal slice K(z,z1;t) = |L|^2 is a stochastic kernel, while the full
kernel is complex and admits no transition-probability reading.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from spintop.exceptions import DimensionMismatchError, ValidationError
from spintop.physics.quantum_top import TopParams, energies
from spintop.physics.spin_core import (
    DensityOperator,
    PhasePoint,
    PointLike,
    QGrid,
    coherent_amplitudes,
)
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

# Samples per vectorized chunk are bounded by this many complex amplitudes.
_CHUNK_AMPLITUDES = 1 << 20
_WITNESS_COUNT = 5


@dataclass(frozen=True)
class KernelWitness:
    """A sampled triple and the bilinear kernel value there."""

    z: PhasePoint
    z1: PhasePoint
    z2: PhasePoint
    value: complex


@dataclass(frozen=True, eq=False)
class KernelScanReport:
    """
    Summary of a seeded scan of the bilinear kernel.

    Attributes:
        min_real: Smallest real part over the sampled triples
        max_abs_imag: Largest |imaginary part| over the sampled triples
        witness_points: Triples with the largest |imag|, then the min-real one
        n_samples: Number of sampled triples
        seed: Seed of the sampling generator
        t: Evolution time
        diagonal_min_real: Smallest K(z, z1) over the (z, z1) samples
        diagonal_max_abs_imag: Largest |imag| on the z1 = z2 slice
    """

    min_real: float
    max_abs_imag: float
    witness_points: List[KernelWitness]
    n_samples: int
    seed: int
    t: float
    diagonal_min_real: float
    diagonal_max_abs_imag: float


def _phases(params: TopParams, t: float) -> np.ndarray:
    return np.exp(-1j * energies(params) * t)


def amplitude_propagator(z: PointLike, z1: PointLike, t: float, params: TopParams) -> complex:
    """<z|U(t)|z1> = sum_k conj(a_k(z)) e^{-i E_k t} a_k(z1)."""
    p, p1 = PhasePoint.coerce(z), PhasePoint.coerce(z1)
    spin = params.spin
    bra = coherent_amplitudes(spin, p.theta, p.phi)
    ket = coherent_amplitudes(spin, p1.theta, p1.phi)
    return complex(np.sum(bra.conj() * _phases(params, t) * ket))


def amplitude_propagator_s1_closed_form(z: PointLike, z1: PointLike, t: float, params: TopParams) -> complex:
    """
    Closed form for s = 1:
    [e^{-i(omega+J/2)t} + 2 conj(z) z1 + conj(z)^2 z1^2 e^{-i(-omega+J/2)t}]
        / ((1+|z|^2)(1+|z1|^2))

    Raises:
        ValidationError: If s != 1 or either label is the south pole
    """
    if params.spin.two_s != 2:
        raise ValidationError("The closed-form propagator holds for s = 1 only", field="s")
    p, p1 = PhasePoint.coerce(z), PhasePoint.coerce(z1)
    if p.is_south_pole or p1.is_south_pole:
        raise ValidationError("The closed-form propagator needs finite labels", field="z")
    w, w1 = np.conj(p.z), p1.z
    omega, coupling = params.omega, params.J
    numerator = (
        np.exp(-1j * (omega + coupling / 2.0) * t)
        + 2.0 * w * w1
        + w ** 2 * w1 ** 2 * np.exp(-1j * (-omega + coupling / 2.0) * t)
    )
    return complex(numerator / ((1.0 + abs(p.z) ** 2) * (1.0 + abs(p1.z) ** 2)))


def bilinear_kernel(z: PointLike, z1: PointLike, z2: PointLike, t: float, params: TopParams) -> complex:
    """L(z,z1;t) conj(L(z,z2;t))."""
    return amplitude_propagator(z, z1, t, params) * np.conj(amplitude_propagator(z, z2, t, params))


def diag_kernel(z: PointLike, z1: PointLike, t: float, params: TopParams) -> float:
    """K(z,z1;t) = |L(z,z1;t)|^2."""
    return abs(amplitude_propagator(z, z1, t, params)) ** 2


def propagate_q(rho0: DensityOperator, grid: QGrid, t: float, params: TopParams) -> QGrid:
    """
    Q(z,t) from the bilinear kernel, contracted through the Dicke basis.

    Writing L(z, z1; t) = sum_k c_k(z) a_k(z1) with c_k(z) = conj(a_k(z)) e^{-i E_k t},
    the z1 and z2 integrals reduce to matrix elements of rho0 by the
    resolution of identity, so
        Q(z,t) = sum_kl c_k(z) rho0_kl conj(c_l(z)).
    """
    if rho0.spin != params.spin or grid.spin != params.spin:
        raise DimensionMismatchError(params.spin.dim, rho0.spin.dim, "density matrix")
    grid.require_exact()
    theta, phi = grid.mesh()
    kernel_rows = coherent_amplitudes(params.spin, theta, phi).conj() * _phases(params, t)
    values = np.einsum("ijk,kl,ijl->ij", kernel_rows, rho0.matrix, kernel_rows.conj()).real
    return grid.with_values(values)


def _propagator_many(params: TopParams, t: float, theta, phi, theta1, phi1) -> np.ndarray:
    bra = coherent_amplitudes(params.spin, theta, phi)
    ket = coherent_amplitudes(params.spin, theta1, phi1)
    return np.einsum("nk,k,nk->n", bra.conj(), _phases(params, t), ket)


def _sample_sphere(rng: np.random.Generator, n: int):
    """Area-uniform angles: cos(theta) ~ U(-1, 1), phi ~ U(0, 2 pi)."""
    theta = np.arccos(rng.uniform(-1.0, 1.0, n))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    return theta, phi


def kernel_positivity_scan(params: TopParams, t: float, n_samples: int, seed: int) -> KernelScanReport:
    """
    Seeded scan of the bilinear kernel over random (z, z1, z2) triples.

    The three labels are drawn in the order z, z1, z2 from
    numpy.random.default_rng(seed), so a scan is reproducible bit for bit.
    Witness values are recomputed with the scalar `bilinear_kernel`.

    Raises:
        ValidationError: If n_samples < 1
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1", field="n_samples")

    rng = np.random.default_rng(seed)
    theta, phi = _sample_sphere(rng, n_samples)
    theta1, phi1 = _sample_sphere(rng, n_samples)
    theta2, phi2 = _sample_sphere(rng, n_samples)

    values = np.empty(n_samples, dtype=complex)
    diagonal = np.empty(n_samples, dtype=complex)
    chunk = max(1, _CHUNK_AMPLITUDES // params.spin.dim)
    for start in range(0, n_samples, chunk):
        window = slice(start, start + chunk)
        first = _propagator_many(params, t, theta[window], phi[window], theta1[window], phi1[window])
        second = _propagator_many(params, t, theta[window], phi[window], theta2[window], phi2[window])
        values[window] = first * second.conj()
        diagonal[window] = first * first.conj()

    by_imag = np.argsort(-np.abs(values.imag), kind="stable")[:_WITNESS_COUNT]
    indices = list(dict.fromkeys([*by_imag.tolist(), int(np.argmin(values.real))]))

    witnesses = []
    for index in indices:
        z = PhasePoint(theta[index], phi[index])
        z1 = PhasePoint(theta1[index], phi1[index])
        z2 = PhasePoint(theta2[index], phi2[index])
        witnesses.append(KernelWitness(z, z1, z2, bilinear_kernel(z, z1, z2, t, params)))

    report = KernelScanReport(
        min_real=float(np.min(values.real)),
        max_abs_imag=float(np.max(np.abs(values.imag))),
        witness_points=witnesses,
        n_samples=n_samples,
        seed=seed,
        t=float(t),
        diagonal_min_real=float(np.min(diagonal.real)),
        diagonal_max_abs_imag=float(np.max(np.abs(diagonal.imag))),
    )
    logger.debug(
        "Kernel scan finished",
        extra={"n_samples": n_samples, "min_real": report.min_real, "max_abs_imag": report.max_abs_imag}
    )
    return report
