"""
JSON outputs: run manifests and report payloads.

JSON is written with sorted keys and a fixed indent so that identical runs
produce identical bytes.
"""

import json
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError as PydanticValidationError

from spintop.constants import FILE_FORMATS
from spintop.exceptions import DataFormatError, StorageError
from spintop.schemas.common import RunManifest


PathLike = Union[str, Path]


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"


def write_json(payload: Any, path: PathLike) -> Path:
    """
    Raises:
        StorageError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.write_text(dumps(payload), encoding="utf-8")
    except OSError as e:
        raise StorageError(f"Cannot write JSON: {e}", path=str(path), operation="write")
    return path


def manifest_path_for(output: PathLike) -> Path:
    """foo.csv -> foo.manifest.json; a directory gets run.manifest.json inside it."""
    output = Path(output)
    if output.is_dir():
        return output / f"run{FILE_FORMATS.MANIFEST_SUFFIX}"
    return output.with_suffix(FILE_FORMATS.MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, path: PathLike) -> Path:
    return write_json(manifest.model_dump(mode="json"), path)


def read_manifest(path: PathLike) -> RunManifest:
    """
    Raises:
        StorageError: If the file cannot be read
        DataFormatError: If it is not a valid manifest
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise StorageError(f"Cannot read manifest: {e}", path=str(path), operation="read")
    try:
        return RunManifest.model_validate_json(text)
    except PydanticValidationError as e:
        raise DataFormatError(f"Invalid manifest: {e}", path=str(path))
