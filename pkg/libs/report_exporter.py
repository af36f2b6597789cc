import json
import math
import os
import re
import sys
import tempfile
import uuid
from typing import Any, Iterable, List

import numpy as np
import pandas as pd

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils import get_logger

logger = get_logger(__name__)

CSV_COLUMNS = [
    "check_id", "n", "alpha", "beta", "p",
    "point", "shell", "x_norm", "y_norm", "cos_angle",
    "quantity", "value",
]


def _format_float(value: float) -> str:
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _prepare(obj: Any, floats: List[str], marker: str) -> Any:
    """Plain JSON types, with every finite float swapped for a marker string indexing ``floats``."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return None
        floats.append(_format_float(value))
        return f"{marker}{len(floats) - 1}"
    if isinstance(obj, np.ndarray):
        return _prepare(obj.tolist(), floats, marker)
    if isinstance(obj, dict):
        return {str(key): _prepare(value, floats, marker) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(item, floats, marker) for item in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def to_json(data: Any, indent: int = 2) -> str:
    """
    Serialize dicts, lists, numbers and strings with 17 significant digits per float.

    Keys keep their insertion order and non-finite floats become ``null``, so
    equal inputs always give byte-identical text.
    """
    floats: List[str] = []
    marker = f"float-{uuid.uuid4().hex}-"
    text = json.dumps(_prepare(data, floats, marker), indent=indent, ensure_ascii=False)
    text = re.sub(f'"{marker}(\\d+)"', lambda match: floats[int(match.group(1))], text)
    return text + "\n"


def _atomic_write(text: str, output_path: str) -> None:
    directory = os.path.dirname(os.path.abspath(output_path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as tmp:
            tmp.write(text)
        os.replace(temp_path, output_path)
    finally:
        if os.path.exists(temp_path):
            os.remove(temp_path)


def write_json(data: Any, output_path: str) -> None:
    """Write ``data`` as UTF-8 JSON (no BOM) to ``output_path``, replacing it atomically."""
    _atomic_write(to_json(data), output_path)
    logger.info(f"Exported JSON to {output_path}")


def reports_to_frame(reports: Iterable) -> pd.DataFrame:
    """One row per (check, grid point) with the fixed column order CSV_COLUMNS."""
    records: List[dict] = []
    for report in reports:
        base = {
            "check_id": report.check_id,
            "n": report.params.get("n"),
            "alpha": report.params.get("alpha"),
            "beta": report.params.get("beta"),
            "p": report.params.get("p"),
        }
        for row in report.rows:
            records.append({**base, **row})
    return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)


def write_csv(reports: Iterable, output_path: str) -> None:
    """Write the per-point rows of ``reports`` as CSV (floats with 17 significant digits)."""
    frame = reports_to_frame(reports)
    text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    _atomic_write(text, output_path)
    logger.info(f"Exported {len(frame)} CSV rows to {output_path}")
