"""CSV series for plotting: candidate scores, RR curve, coefficient functions, field grid."""

import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from src.domain.models import Field

logger = logging.getLogger(__name__)

CANDIDATE_COLUMNS = ["candidate", "support", "sparsity", "criterion", "score", "residual"]


def _write(df: pd.DataFrame, path: Path) -> str:
    df.to_csv(path, index=False, float_format="%.17g")
    return str(path)


def candidates_frame(report: dict) -> pd.DataFrame:
    rows = []
    for i, cand in enumerate(report.get("candidates") or []):
        rows.append({
            "candidate": i,
            "support": " + ".join(cand.get("support", [])),
            "sparsity": len(cand.get("support", [])),
            "criterion": cand.get("criterion", ""),
            "score": cand.get("score"),
            "residual": cand.get("residual"),
        })
    return pd.DataFrame(rows, columns=CANDIDATE_COLUMNS)


def emit_plots(report: dict, out_dir: Union[str, Path], field: Optional[Field] = None) -> List[str]:
    """Write the plot series available in the report; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [_write(candidates_frame(report), out / "tee_candidates.csv")]

    rr = report.get("rr_curve")
    if rr is not None:
        paths.append(_write(pd.DataFrame({"k": np.arange(1, len(rr) + 1), "s_k": rr}), out / "rr_curve.csv"))

    functions = report.get("coefficient_functions")
    if functions:
        values = {label: np.asarray(v, dtype=float) for label, v in functions["values"].items()}
        if any(v.ndim == 2 for v in values.values()):
            x, t = np.meshgrid(functions["x"], functions["t"], indexing="ij")
            df = pd.DataFrame({"x": x.ravel(order="F"), "t": t.ravel(order="F")})
            for label, v in values.items():
                df[label] = (v if v.ndim == 2 else np.repeat(v[:, None], x.shape[1], axis=1)).ravel(order="F")
        else:
            df = pd.DataFrame({"x": functions["x"], **values})
        paths.append(_write(df, out / "coefficient_functions.csv"))

    if field is not None:
        x, t = np.meshgrid(field.grid.x, field.grid.t, indexing="ij")
        df = pd.DataFrame({"x": x.ravel(order="F"), "t": t.ravel(order="F"),
                           "u": field.values.ravel(order="F")})
        paths.append(_write(df, out / "field_grid.csv"))
    logger.info("Wrote %d plot files to %s", len(paths), out)
    return paths
