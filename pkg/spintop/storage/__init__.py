"""
File formats of the simulator.

Grids are exchanged as CSV, rendered as PGM heatmaps, and every CLI run
leaves a JSON manifest next to its outputs.
"""

from spintop.storage.grid_csv import read_grid_csv, write_grid_csv
from spintop.storage.heatmap import render_gray, write_heatmap
from spintop.storage.manifest import manifest_path_for, read_manifest, write_json, write_manifest

__all__ = [
    "read_grid_csv",
    "write_grid_csv",
    "render_gray",
    "write_heatmap",
    "manifest_path_for",
    "read_manifest",
    "write_json",
    "write_manifest",
]
