"""Result persistence and summaries.

The CSV header is fixed by CSV_COLUMNS. Rates are written with 6 decimals, wall times with 3,
flags as true/false, and lines end with LF.
"""

import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd
from tabulate import tabulate

from models.experiment import CSV_COLUMNS, ResultRecord, Scheme
from models.surface import SurfaceGrid
from utils.errors import InvalidInputError, ResultsIOError
from utils.telemetry import tracer, Status, StatusCode

logger = logging.getLogger(__name__)

GROUP_KEYS = ("scheme", "my", "mz", "m_hat", "bits")
Z_95 = 1.96
SINGLE_TRIAL_NOTE = "single trial, sd undefined"


def records_frame(records: Sequence[ResultRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.model_dump(mode="json") for record in records], columns=list(CSV_COLUMNS))


def write_csv(records: Sequence[ResultRecord], out_path: Union[str, Path]) -> Path:
    path = Path(out_path)
    with tracer.start_as_current_span("write_csv") as span:
        try:
            span.set_attribute("results.path", str(path))
            span.set_attribute("results.records", len(records))
            frame = records_frame(records)
            frame["converged"] = frame["converged"].map(lambda flag: "true" if flag else "false")
            frame["rate_bps_hz"] = frame["rate_bps_hz"].map(lambda rate: f"{rate:.6f}")
            frame["wall_ms"] = frame["wall_ms"].map(lambda ms: f"{ms:.3f}")
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                frame.to_csv(path, index=False, lineterminator="\n")
            except OSError as e:
                raise ResultsIOError(f"cannot write results to {path}: {e}") from e
            logger.info("✅ Wrote %d records to %s", len(records), path)
            return path

        except Exception as e:
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise


def read_csv(path: Union[str, Path]) -> List[ResultRecord]:
    """Parse a file written by write_csv back into records."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ResultsIOError(f"cannot read results from {path}: {e}") from e
    if tuple(frame.columns) != CSV_COLUMNS:
        raise ResultsIOError(f"{path} does not have the results header {','.join(CSV_COLUMNS)}")
    rows = frame.to_dict(orient="records")
    for row in rows:
        row["converged"] = row["converged"] == "true"
    return [ResultRecord(**row) for row in rows]


def summarize_frame(records: Sequence[ResultRecord]) -> pd.DataFrame:
    """Per (scheme, my, mz, m_hat, bits): n, mean, sample sd and 95% half-width of the rate.

    Failed records are left out.
    """
    ok = [record for record in records if not record.failed]
    columns = list(GROUP_KEYS) + ["n", "mean", "sd", "ci95", "note"]
    if not ok:
        return pd.DataFrame(columns=columns)
    frame = records_frame(ok)
    summary = (
        frame.groupby(list(GROUP_KEYS), sort=True)["rate_bps_hz"]
        .agg(n="count", mean="mean", sd="std")
        .reset_index()
    )
    summary["note"] = np.where(summary["sd"].isna(), SINGLE_TRIAL_NOTE, "")
    summary["sd"] = summary["sd"].fillna(0.0)
    summary["ci95"] = Z_95 * summary["sd"] / np.sqrt(summary["n"])
    return summary[columns]


def fris_ris_ratios(summary: pd.DataFrame) -> pd.DataFrame:
    """Mean FRIS rate over mean RIS rate on the same surface.

    A FRIS row pairs with the RIS row of equal (m_hat, bits), or with the only RIS row of its
    surface when the benchmark runs at its own m_hat / bits.
    """
    fris = summary[summary["scheme"] == Scheme.FRIS.value]
    ris = summary[summary["scheme"] == Scheme.RIS.value]
    rows = []
    for row in fris.to_dict(orient="records"):
        same_surface = ris[(ris["my"] == row["my"]) & (ris["mz"] == row["mz"])]
        exact = same_surface[(same_surface["m_hat"] == row["m_hat"]) & (same_surface["bits"] == row["bits"])]
        match = exact if len(exact) else same_surface
        if len(match) != 1:
            continue
        bench = match.iloc[0]
        rows.append({
            "my": row["my"], "mz": row["mz"], "m_hat": row["m_hat"], "bits": row["bits"],
            "ris_m_hat": bench["m_hat"], "ris_bits": bench["bits"],
            "ratio": row["mean"] / bench["mean"] if bench["mean"] > 0 else float("nan"),
        })
    return pd.DataFrame(rows, columns=["my", "mz", "m_hat", "bits", "ris_m_hat", "ris_bits", "ratio"])


def summarize(records: Sequence[ResultRecord]) -> str:
    if not records:
        raise InvalidInputError("nothing to summarize")
    summary = summarize_frame(records)
    lines = [tabulate(summary, headers="keys", tablefmt="github", floatfmt=".6f", showindex=False)]

    for row in fris_ris_ratios(summary).to_dict(orient="records"):
        benchmark = ""
        if (row["ris_m_hat"], row["ris_bits"]) != (row["m_hat"], row["bits"]):
            benchmark = f" vs RIS m_hat={row['ris_m_hat']}, b={row['ris_bits']}"
        lines.append(
            f"FRIS/RIS mean-rate ratio (my={row['my']}, mz={row['mz']}, "
            f"m_hat={row['m_hat']}, b={row['bits']}{benchmark}): {row['ratio']:.3f}"
        )

    failed = [record for record in records if record.failed]
    if failed:
        lines.append(f"Excluded {len(failed)} failed records:")
        lines.extend(f"  trial {r.trial} {r.scheme.value}: {r.failure}" for r in failed)
    return "\n".join(lines)


def render_layout(grid: SurfaceGrid, xi: np.ndarray) -> str:
    """Text map of the surface, one line per lattice row: '#' active, '.' off."""
    xi = np.asarray(xi)
    if xi.shape != (grid.m,):
        raise InvalidInputError(f"selection has shape {xi.shape}, surface has {grid.m} elements")
    cells = np.where(xi.reshape(grid.mz, grid.my) != 0, "#", ".")
    return "\n".join("".join(row) for row in cells)
