"""
Command line interface.

Subcommands: evolve, compare, divergence, scan, dephase, bell, decay, ghz.
Results are printed to stdout as JSON; logs go to stderr. Every command that
writes files also writes a run manifest next to them.

Exit codes: 0 success, 2 usage error, 3 numerical validation failure,
4 I/O error.
"""

import argparse
import re
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence
from uuid import uuid4

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from spintop import __version__
from spintop.config import get_settings
from spintop.constants import EXIT_CODES, EvolutionMode
from spintop.exceptions import SpinTopError, StorageError
from spintop.schemas.common import ComplexValue, GridSpec, RunManifest, TopParamsSchema
from spintop.schemas.report import ScanRequest
from spintop.schemas.simulation import DephaseRequest, EvolveRequest
from spintop.services.report_service import ReportService
from spintop.services.simulation_service import SimulationService
from spintop.storage import (
    manifest_path_for,
    read_grid_csv,
    write_grid_csv,
    write_heatmap,
    write_json,
    write_manifest,
)
from spintop.storage.manifest import dumps
from spintop.utils.logger import clear_log_context, get_logger, set_run_context, setup_logging

logger = get_logger(__name__)

_REAL_PATTERN = re.compile(r"([+-]?)(\d+\.?\d*(?:e[+-]?\d+)?|\.\d+(?:e[+-]?\d+)?)?\*?(pi)?(?:/(\d+\.?\d*))?")


# ============================================================================
# Argument parsing
# ============================================================================


def parse_real(text: str) -> float:
    """
    Parse a real number, allowing multiples of pi: "0.5", "2pi", "-pi/2", "3*pi/4".
    """
    cleaned = text.strip().lower().replace(" ", "")
    match = _REAL_PATTERN.fullmatch(cleaned)
    if not match or not (match.group(2) or match.group(3)) or ("*" in cleaned and not match.group(3)):
        raise argparse.ArgumentTypeError(f"Invalid number {text!r}")
    sign, number, pi, divisor = match.groups()
    value = float(number) if number else 1.0
    if pi:
        value *= np.pi
    if divisor:
        if float(divisor) == 0.0:
            raise argparse.ArgumentTypeError(f"Division by zero in {text!r}")
        value /= float(divisor)
    return -value if sign == "-" else value


def parse_complex(text: str) -> complex:
    """Parse a complex literal of the form "a+bi" (also "a", "bi", "i")."""
    cleaned = text.strip().replace(" ", "").replace("I", "i")
    if not cleaned or "j" in cleaned:
        raise argparse.ArgumentTypeError(f"Invalid complex value {text!r}; use the form a+bi")
    if cleaned.endswith("i"):
        body = cleaned[:-1]
        if body == "" or body[-1] in "+-":
            body += "1"
        cleaned = body + "j"
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid complex value {text!r}; use the form a+bi")


def parse_grid(text: str) -> GridSpec:
    """Parse "NxM" into (n_theta, n_phi)."""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"Invalid grid {text!r}; use NxM")
    try:
        return GridSpec(n_theta=int(parts[0]), n_phi=int(parts[1]))
    except (ValueError, PydanticValidationError) as e:
        raise argparse.ArgumentTypeError(f"Invalid grid {text!r}: {e}")


def _add_top_arguments(parser: argparse.ArgumentParser, with_grid: bool = True) -> None:
    parser.add_argument("--s", default="1", help='Spin quantum number, e.g. 1, 0.5 or "3/2"')
    parser.add_argument("--omega", type=parse_real, default=0.0, help="Linear precession rate")
    parser.add_argument("--J", type=parse_real, default=1.0, help="Twist strength")
    if with_grid:
        parser.add_argument("--grid", type=parse_grid, default=None, help="Quadrature grid NxM")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spintop",
        description="Classical vs quantum dynamics of the nonlinear top.",
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", help="Evolve |z0> and write its Q grid")
    _add_top_arguments(evolve)
    evolve.add_argument("--mode", choices=[m.value for m in EvolutionMode], default="quantum")
    evolve.add_argument("--gamma", type=parse_real, default=None, help="Dephasing rate (dephasing mode only)")
    evolve.add_argument("--t", type=parse_real, default=0.0, help="Evolution time")
    evolve.add_argument("--z0", type=parse_complex, default=1 + 0j, help="Initial label a+bi")
    evolve.add_argument("--out", required=True, help="Output CSV path")
    evolve.add_argument("--heatmap", default=None, help="Optional PGM heatmap path")
    evolve.set_defaults(handler=cmd_evolve)

    compare = commands.add_parser("compare", help="Compare two grid CSV files")
    compare.add_argument("file_a")
    compare.add_argument("file_b")
    compare.add_argument("--out", default=None, help="Optional JSON report path")
    compare.set_defaults(handler=cmd_compare)

    divergence = commands.add_parser("divergence", help="Divergence study at t = 2 pi / J")
    _add_top_arguments(divergence)
    divergence.add_argument("--outdir", required=True)
    divergence.set_defaults(handler=cmd_divergence)

    scan = commands.add_parser("scan", help="Seeded scan of the bilinear kernel")
    _add_top_arguments(scan, with_grid=False)
    scan.add_argument("--t", type=parse_real, required=True)
    scan.add_argument("--samples", type=int, default=None)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--out", default=None)
    scan.set_defaults(handler=cmd_scan)

    dephase = commands.add_parser("dephase", help="Long-time dephasing correspondence")
    _add_top_arguments(dephase)
    dephase.add_argument("--gamma", type=parse_real, required=True)
    dephase.add_argument("--t", type=parse_real, required=True)
    dephase.add_argument("--z0", type=parse_complex, default=1 + 0j)
    dephase.add_argument("--out", default=None)
    dephase.set_defaults(handler=cmd_dephase)

    bell = commands.add_parser("bell", help="Run the Bell pulse sequence")
    bell.add_argument("--out", default=None)
    bell.set_defaults(handler=cmd_bell)

    decay = commands.add_parser("decay", help="Signal decay (1 + 2^{2n-1})^{-g}")
    decay.add_argument("--n", type=int, required=True)
    decay.add_argument("--g", type=parse_real, required=True)
    decay.add_argument("--out", default=None)
    decay.set_defaults(handler=cmd_decay)

    ghz = commands.add_parser("ghz", help="GHZ state from a CNOT cascade")
    ghz.add_argument("--n", type=int, required=True)
    ghz.add_argument("--out", default=None)
    ghz.set_defaults(handler=cmd_ghz)

    return parser


# ============================================================================
# Helpers
# ============================================================================


def _ensure_parent(path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise StorageError(f"Cannot create directory: {e}", path=str(path.parent), operation="mkdir")
    return path


def _grid_spec(args: argparse.Namespace) -> GridSpec:
    return args.grid or GridSpec()


def _top_fields(args: argparse.Namespace) -> Dict[str, Any]:
    return {"s": args.s, "omega": args.omega, "J": args.J}


def _finish(
    command: str,
    payload: Dict[str, Any],
    params: Dict[str, Any],
    outputs: List[Path],
    out: Optional[str] = None,
    seed: Optional[int] = None,
    manifest_target: Optional[Path] = None,
) -> int:
    """Write the optional JSON report and the manifest, then print the payload."""
    if out:
        outputs.append(write_json(payload, _ensure_parent(Path(out))))
    if outputs:
        target = manifest_target or manifest_path_for(outputs[0])
        manifest = RunManifest(
            command=command,
            params=params,
            seed=seed,
            outputs=[str(path) for path in outputs],
            version=__version__,
        )
        write_manifest(manifest, target)
    sys.stdout.write(dumps(payload))
    return EXIT_CODES.OK


# ============================================================================
# Commands
# ============================================================================


def cmd_evolve(args: argparse.Namespace) -> int:
    grid_spec = _grid_spec(args)
    request = EvolveRequest(
        **_top_fields(args),
        mode=args.mode,
        gamma=args.gamma,
        t=args.t,
        z0=ComplexValue.of(args.z0),
        n_theta=grid_spec.n_theta,
        n_phi=grid_spec.n_phi,
    )
    service = SimulationService()
    grid = service.evolve(request)

    outputs = [write_grid_csv(grid, _ensure_parent(Path(args.out)))]
    if args.heatmap:
        outputs.append(write_heatmap(grid, _ensure_parent(Path(args.heatmap))))
    summary = service.summarize(grid, request).model_dump(mode="json", exclude={"values"})
    return _finish("evolve", summary, request.model_dump(mode="json"), outputs)


def cmd_compare(args: argparse.Namespace) -> int:
    service = SimulationService()
    report = service.compare_grids(read_grid_csv(args.file_a), read_grid_csv(args.file_b))
    params = {"file_a": args.file_a, "file_b": args.file_b}
    return _finish("compare", report.model_dump(mode="json"), params, [], out=args.out)


def cmd_divergence(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise StorageError(f"Cannot create directory: {e}", path=str(outdir), operation="mkdir")

    top = TopParamsSchema(**_top_fields(args))
    grid_spec = _grid_spec(args)
    result = SimulationService().divergence(top, grid_spec)

    outputs: List[Path] = []
    panels = (("a_initial", result.initial), ("b_classical", result.classical), ("c_quantum", result.quantum))
    for name, grid in panels:
        outputs.append(write_grid_csv(grid, outdir / f"panel_{name}.csv"))
        outputs.append(write_heatmap(grid, outdir / f"panel_{name}.pgm"))
    payload = result.report.model_dump(mode="json")
    outputs.append(write_json(payload, outdir / "comparison.json"))

    params = {**top.model_dump(mode="json"), **grid_spec.model_dump(mode="json")}
    return _finish("divergence", payload, params, outputs, manifest_target=manifest_path_for(outdir))


def cmd_scan(args: argparse.Namespace) -> int:
    fields = {**_top_fields(args), "t": args.t, "seed": args.seed}
    if args.samples is not None:
        fields["n_samples"] = args.samples
    request = ScanRequest(**fields)
    report = ReportService().scan(request)
    return _finish(
        "scan",
        report.model_dump(mode="json"),
        request.model_dump(mode="json"),
        [],
        out=args.out,
        seed=request.seed,
    )


def cmd_dephase(args: argparse.Namespace) -> int:
    grid_spec = _grid_spec(args)
    request = DephaseRequest(
        **_top_fields(args),
        gamma=args.gamma,
        t=args.t,
        z0=ComplexValue.of(args.z0),
        n_theta=grid_spec.n_theta,
        n_phi=grid_spec.n_phi,
    )
    report = SimulationService().dephase(request)
    return _finish("dephase", report.model_dump(mode="json"), request.model_dump(mode="json"), [], out=args.out)


def cmd_bell(args: argparse.Namespace) -> int:
    report = ReportService().bell()
    return _finish("bell", report.model_dump(mode="json"), {}, [], out=args.out)


def cmd_decay(args: argparse.Namespace) -> int:
    report = ReportService().decay(args.n, args.g)
    return _finish("decay", report.model_dump(mode="json"), {"n": args.n, "g": args.g}, [], out=args.out)


def cmd_ghz(args: argparse.Namespace) -> int:
    report = ReportService().ghz(args.n)
    return _finish("ghz", report.model_dump(mode="json"), {"n": args.n}, [], out=args.out)


# ============================================================================
# Entry point
# ============================================================================


def _report_error(kind: str, message: str, details: Any = None) -> None:
    sys.stderr.write(dumps({"error": kind, "message": message, "details": details}))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and return its exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES.OK if e.code in (0, None) else EXIT_CODES.USAGE

    settings = get_settings()
    setup_logging(
        log_level=args.log_level or settings.LOG_LEVEL,
        use_json=settings.USE_JSON_LOGS,
        stream=sys.stderr,
        log_file=settings.LOG_FILE,
    )
    set_run_context(run_id=str(uuid4()), command=args.command)
    handler: Callable[[argparse.Namespace], int] = args.handler

    try:
        logger.info(f"CLI: Running {args.command}")
        return handler(args)

    except PydanticValidationError as e:
        logger.warning(f"Invalid parameters for {args.command}")
        _report_error("VALIDATION_ERROR", "Invalid parameters", e.errors(include_url=False, include_context=False))
        return EXIT_CODES.USAGE

    except SpinTopError as e:
        logger.error(f"{args.command} failed: {e.message}", extra={"error_code": e.error_code})
        _report_error(e.error_code, e.message, e.details)
        return e.exit_code

    finally:
        clear_log_context()


if __name__ == "__main__":
    sys.exit(main())
