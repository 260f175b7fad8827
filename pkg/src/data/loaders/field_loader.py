"""Field CSV loading.

Line 1 is a header `# nx=.. nt=.. x0=.. dx=.. t0=.. dt=.. boundary=..`,
then one time slice per line with nx comma-separated values.
"""

import logging
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from src.domain.errors import FieldError
from src.domain.models import Boundary, Field, Grid

logger = logging.getLogger(__name__)

HEADER_KEYS = ("nx", "nt", "x0", "dx", "t0", "dt", "boundary")


def parse_header(line: str) -> Dict[str, str]:
    if not line.startswith("#"):
        raise FieldError(f"field header must start with '#', got {line[:40]!r}")
    pairs = {}
    for token in line[1:].split():
        key, sep, value = token.partition("=")
        if sep:
            pairs[key] = value
    missing = [k for k in HEADER_KEYS if k not in pairs]
    if missing:
        raise FieldError(f"field header is missing {missing}")
    return pairs


def load_field(file_path: Union[str, Path]) -> Field:
    path = Path(file_path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            header = parse_header(f.readline().strip())
    except FileNotFoundError:
        raise FieldError(f"field file not found: {path}")
    try:
        grid = Grid(
            x0=float(header["x0"]), dx=float(header["dx"]), nx=int(header["nx"]),
            t0=float(header["t0"]), dt=float(header["dt"]), nt=int(header["nt"]),
            boundary=Boundary(header["boundary"]),
        )
    except ValueError as e:
        raise FieldError(f"bad field header in {path}: {e}")
    try:
        df = pd.read_csv(path, skiprows=1, header=None, dtype=float)
    except (pd.errors.EmptyDataError, ValueError) as e:
        raise FieldError(f"cannot read field values from {path}: {e}")
    field = Field(grid, df.to_numpy().T)
    logger.info("Loaded field %s: nx=%d nt=%d (%s)", path, grid.nx, grid.nt, grid.boundary.value)
    return field
