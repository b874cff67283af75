"""
Grid CSV format.

One header line `theta,phi,re_z,im_z,weight,Q`, then one row per node in
theta-major order. Values are written with 17 significant digits so that
reading a file back reproduces every double exactly. The reader recovers the
grid shape from the run of rows sharing the first theta, and the spin from
the weight total, which is 2s+1.
"""

from pathlib import Path
from typing import Union

import numpy as np

from spintop.constants import FILE_FORMATS, TOLERANCES
from spintop.exceptions import DataFormatError, StorageError
from spintop.physics.spin_core import QGrid, SpinQuantum
from spintop.utils.logger import get_logger


logger = get_logger(__name__)

PathLike = Union[str, Path]


def grid_rows(grid: QGrid) -> np.ndarray:
    """(node_count, 6) array of the CSV columns."""
    theta, phi = grid.mesh()
    z = np.exp(1j * phi) * np.tan(theta / 2.0)
    return np.column_stack([
        theta.ravel(),
        phi.ravel(),
        z.real.ravel(),
        z.imag.ravel(),
        grid.weights.ravel(),
        grid.values.ravel(),
    ])


def write_grid_csv(grid: QGrid, path: PathLike) -> Path:
    """
    Write a grid to CSV.

    Raises:
        StorageError: If the file cannot be written
    """
    path = Path(path)
    try:
        np.savetxt(
            path,
            grid_rows(grid),
            fmt=FILE_FORMATS.FLOAT_FORMAT,
            delimiter=",",
            header=FILE_FORMATS.CSV_HEADER,
            comments="",
        )
    except OSError as e:
        raise StorageError(f"Cannot write grid: {e}", path=str(path), operation="write")
    logger.debug("Grid written", extra={"path": str(path), "nodes": grid.node_count})
    return path


def _infer_spin(weights: np.ndarray, path: Path) -> SpinQuantum:
    total = float(np.sum(weights))
    two_s = int(round(total - 1.0))
    if two_s < 1 or abs(total - (two_s + 1)) > TOLERANCES.QUADRATURE * total:
        raise DataFormatError(
            f"Weights sum to {total!r}, which is not 2s+1 for a valid spin",
            path=str(path)
        )
    return SpinQuantum(two_s)


def read_grid_csv(path: PathLike) -> QGrid:
    """
    Read a grid written by write_grid_csv.

    Raises:
        StorageError: If the file cannot be opened
        DataFormatError: If the header, shape or weights are inconsistent
    """
    path = Path(path)
    try:
        with path.open("r") as handle:
            header = handle.readline().strip()
            if header != FILE_FORMATS.CSV_HEADER:
                raise DataFormatError(f"Unexpected CSV header {header!r}", path=str(path))
            data = np.loadtxt(handle, delimiter=",", ndmin=2)
    except OSError as e:
        raise StorageError(f"Cannot read grid: {e}", path=str(path), operation="read")
    except ValueError as e:
        raise DataFormatError(f"Malformed grid CSV: {e}", path=str(path))

    if data.shape[0] == 0 or data.shape[1] != FILE_FORMATS.CSV_COLUMNS:
        raise DataFormatError(
            f"Expected {FILE_FORMATS.CSV_COLUMNS} columns and at least one row",
            path=str(path),
            details={"shape": list(data.shape)}
        )

    thetas_column = data[:, 0]
    n_phi = int(np.argmax(thetas_column != thetas_column[0])) or thetas_column.size
    if thetas_column.size % n_phi:
        raise DataFormatError("Row count is not a multiple of the ring size", path=str(path))
    n_theta = thetas_column.size // n_phi

    blocks = data.reshape(n_theta, n_phi, FILE_FORMATS.CSV_COLUMNS)
    thetas = blocks[:, 0, 0]
    phis = blocks[0, :, 1]
    if not (np.all(blocks[:, :, 0] == thetas[:, None]) and np.all(blocks[:, :, 1] == phis[None, :])):
        raise DataFormatError("Rows are not a theta-major tensor grid", path=str(path))

    weights = blocks[:, :, 4]
    spin = _infer_spin(weights, path)
    try:
        grid = QGrid(spin, thetas, phis, weights, blocks[:, :, 5])
    except Exception as e:
        raise DataFormatError(f"Invalid grid data: {e}", path=str(path))
    logger.debug("Grid read", extra={"path": str(path), "n_theta": n_theta, "n_phi": n_phi})
    return grid
