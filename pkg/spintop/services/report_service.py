"""
Business logic for the kernel scan and the NMR reports.
"""

import numpy as np

from spintop.exceptions import NumericalValidationError, SpinTopError
from spintop.monitoring.metrics import timeit
from spintop.physics.nmr_gates import (
    BELL_GLOBAL_PHASE,
    bell_pulse_sequence,
    bell_sequence,
    bell_state,
    ghz_cascade,
    min_partial_transpose_eigenvalue,
    ppt_entangled,
    signal_decay,
    signal_decay_log10,
)
from spintop.physics.propagators import kernel_positivity_scan
from spintop.schemas.common import ComplexValue
from spintop.schemas.report import (
    BellReport,
    DecayReport,
    GhzReport,
    KernelScanResponse,
    ScanRequest,
    WitnessSchema,
)
from spintop.utils.logger import get_logger, log_exception

logger = get_logger(__name__)


class ReportService:
    """
    Service class for reports that do not produce grids.
    """

    @timeit("kernel_scan")
    def scan(self, request: ScanRequest) -> KernelScanResponse:
        """
        Seeded scan of the bilinear propagator kernel.

        Raises:
            SpinTopError: On invalid input
        """
        try:
            logger.info(
                f"Report: Kernel scan s={request.s} t={request.t}",
                extra={"n_samples": request.n_samples, "seed": request.seed}
            )
            report = kernel_positivity_scan(request.to_params(), request.t, request.n_samples, request.seed)
            response = KernelScanResponse(
                min_real=report.min_real,
                max_abs_imag=report.max_abs_imag,
                witness_points=[
                    WitnessSchema(
                        z=ComplexValue.of(w.z.z),
                        z1=ComplexValue.of(w.z1.z),
                        z2=ComplexValue.of(w.z2.z),
                        value=ComplexValue.of(w.value),
                    )
                    for w in report.witness_points
                ],
                n_samples=report.n_samples,
                seed=report.seed,
                t=report.t,
                diagonal_min_real=report.diagonal_min_real,
                diagonal_max_abs_imag=report.diagonal_max_abs_imag,
            )
            logger.info("Kernel scan finished", extra={"max_abs_imag": response.max_abs_imag})
            return response

        except SpinTopError as e:
            logger.warning(f"Kernel scan rejected: {e.message}")
            raise

        except Exception as e:
            log_exception(logger, "Unexpected error during kernel scan", error=str(e))
            raise NumericalValidationError(
                message="An unexpected error occurred during the kernel scan",
                check="scan",
                details={"error": str(e)}
            )

    def decay(self, n: int, g: float) -> DecayReport:
        """Signal decay (1 + 2^{2n-1})^{-g}."""
        logger.info(f"Report: Signal decay n={n} g={g}")
        return DecayReport(n=n, g=g, value=signal_decay(n, g), log10=signal_decay_log10(n, g))

    def bell(self) -> BellReport:
        """Run the Bell pulse sequence on |00> and test the output."""
        logger.info("Report: Bell sequence")
        output = bell_sequence()
        projector = output.projector()
        report = BellReport(
            fidelity=output.fidelity(bell_state()),
            entangled=ppt_entangled(projector),
            min_partial_transpose_eigenvalue=min_partial_transpose_eigenvalue(projector),
            amplitudes=[ComplexValue.of(a) for a in output.amplitudes],
            sequence=[term.to_dict() for term in bell_pulse_sequence().terms],
            global_phase=BELL_GLOBAL_PHASE,
        )
        logger.info("Bell sequence finished", extra={"fidelity": report.fidelity})
        return report

    def ghz(self, n: int) -> GhzReport:
        """Run the Hadamard + CNOT cascade on n qubits."""
        logger.info(f"Report: GHZ cascade n={n}")
        state = ghz_cascade(n)
        nonzero = np.flatnonzero(np.abs(state.amplitudes) > 0.0)
        return GhzReport(
            n=n,
            norm=float(np.linalg.norm(state.amplitudes)),
            nonzero_indices=nonzero.tolist(),
            amplitudes=[ComplexValue.of(state.amplitudes[i]) for i in nonzero],
        )
