"""Field CSV writing, the inverse of load_field."""

from pathlib import Path
from typing import Union

import pandas as pd

from src.domain.models import Field


def field_header(field: Field) -> str:
    g = field.grid
    return (f"# nx={g.nx} nt={g.nt} x0={float(g.x0)!r} dx={float(g.dx)!r} t0={float(g.t0)!r} dt={float(g.dt)!r} "
            f"boundary={g.boundary.value}")


def write_field(field: Field, file_path: Union[str, Path]) -> str:
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8", newline="") as f:
        f.write(field_header(field) + "\n")
        pd.DataFrame(field.values.T).to_csv(f, header=False, index=False, float_format="%.17g")
    return str(file_path)
