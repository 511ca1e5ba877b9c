"""
Report, CSV and matrix file helpers
"""
import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

# RFC-4180 records end with CRLF
CSV_LINE_TERMINATOR = "\r\n"
CSV_FLOAT_FORMAT = "%.17g"


def ensure_parent(path: Path) -> Path:
    """Create the parent directory of an output file"""
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def to_jsonable(value: Any) -> Any:
    """numpy scalars and arrays to plain Python values"""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(by_alias=True))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def dump_json(payload: Any) -> str:
    """UTF-8 JSON; floats use the shortest round-trip representation"""
    return json.dumps(to_jsonable(payload), indent=2, ensure_ascii=False, allow_nan=False)


def write_json(payload: Any, path: Optional[Path] = None) -> None:
    """Write JSON to a file, or to stdout when no path is given"""
    text = dump_json(payload)
    if path is None:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()
        return
    ensure_parent(path).write_text(text + "\n", encoding="utf-8")


def read_json(path: Path) -> Dict[str, Any]:
    return json.loads(path.read_text(encoding="utf-8"))


def write_csv(frame: pd.DataFrame, path: Optional[Path] = None) -> str:
    """
    Write a frame as RFC-4180 CSV with 17 significant digits

    Returns:
        The CSV text
    """
    text = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator=CSV_LINE_TERMINATOR)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(ensure_parent(path), "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return text


def write_matrices(matrices: Dict[str, np.ndarray], path: Path) -> Path:
    """Sidecar archive of named matrices"""
    np.savez_compressed(ensure_parent(path), **matrices)
    return path
