"""JSON report writing."""

import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np


def to_jsonable(value: Any) -> Any:
    """Plain Python structure; non-finite floats become strings ("inf", "nan")."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    return value


def write_report(report: dict, file_path: Union[str, Path]) -> str:
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(report), f, indent=2, sort_keys=True)
        f.write("\n")
    return str(file_path)


def read_report(file_path: Union[str, Path]) -> dict:
    with open(Path(file_path), "r", encoding="utf-8") as f:
        return json.load(f)
