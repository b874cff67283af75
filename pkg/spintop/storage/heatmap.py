"""
Grayscale heatmaps of grid values as binary PGM (P5) rasters.

phi runs horizontally and theta vertically (north pole on top); gray levels
are linear over [0, max value].
"""

from pathlib import Path
from typing import Union

import numpy as np

from spintop.constants import FILE_FORMATS
from spintop.exceptions import StorageError
from spintop.physics.spin_core import QGrid
from spintop.utils.logger import get_logger


logger = get_logger(__name__)


def render_gray(values: np.ndarray) -> np.ndarray:
    """Map values onto 0..PGM_MAX_GRAY; negative values clip to black."""
    values = np.clip(np.asarray(values, dtype=float), 0.0, None)
    peak = float(np.max(values)) if values.size else 0.0
    if peak <= 0.0:
        return np.zeros(values.shape, dtype=np.uint8)
    return np.rint(values / peak * FILE_FORMATS.PGM_MAX_GRAY).astype(np.uint8)


def write_heatmap(grid: QGrid, path: Union[str, Path]) -> Path:
    """
    Write the grid values as a P5 graymap.

    Raises:
        StorageError: If the file cannot be written
    """
    path = Path(path)
    pixels = render_gray(grid.values)
    height, width = pixels.shape
    header = f"P5\n{width} {height}\n{FILE_FORMATS.PGM_MAX_GRAY}\n".encode("ascii")
    try:
        path.write_bytes(header + pixels.tobytes())
    except OSError as e:
        raise StorageError(f"Cannot write heatmap: {e}", path=str(path), operation="write")
    logger.debug("Heatmap written", extra={"path": str(path), "width": width, "height": height})
    return path
