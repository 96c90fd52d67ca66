# utils/io.py
"""File formats.

Input, one row per acquisition frame:

    t_min,blood,kidney,bladder[,kidney_err,bladder_err]

Output of an ensemble (or a single fit) into a directory:

    coefficients.csv  rows mean/std, columns k_bt,k_tp,k_pt,k_up,k_tb,k_pb
    strips.csv        t_min, kidney_data, bladder_data, kidney_run01.., bladder_run01..
                      (kidney_data is the blood-corrected kidney series the fit targets)
    runs.json         {"schema", "rate_names", "aco", "initial_values", "runs": [
                          {"seed", "rates": {k_ab: value}, "cost", "iterations",
                           "converged", "case"}]}

All floats are written with 17 significant digits so files reload bit-exact.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from kinetics.errors import NegativeValueError, NonMonotoneTimeError, ParseError
from kinetics.synth import AcquisitionSchedule, MeasurementSet
from kinetics.types import RATE_NAMES

logger = logging.getLogger(__name__)

MEASUREMENT_COLUMNS = ["t_min", "blood", "kidney", "bladder"]
ERROR_COLUMNS = ["kidney_err", "bladder_err"]
RUNS_SCHEMA = "renal-aco/runs-v1"
FLOAT_FORMAT = "%.17g"


# -----------------------------
# Measurements
# -----------------------------
def _read_table(path) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, float_precision="round_trip", skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise ParseError("measurement file is empty", row=1) from e
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed measurement file: {e}") from e
    df.columns = [str(c).strip() for c in df.columns]
    return df


def _check_header(columns):
    n_req = len(MEASUREMENT_COLUMNS)
    for i, expected in enumerate(MEASUREMENT_COLUMNS):
        found = columns[i] if i < len(columns) else None
        if found != expected:
            raise ParseError(f"expected column '{expected}' at position {i + 1}, found {found!r}", row=1, column=expected)
    extra = columns[n_req:]
    if extra and extra != ERROR_COLUMNS:
        raise ParseError(
            f"optional columns must be exactly {ERROR_COLUMNS}, found {extra}", row=1, column=extra[0]
        )


def load_measurements(path) -> MeasurementSet:
    """Parse and validate a measurement CSV; rows are reported as file line numbers."""
    df = _read_table(path)
    columns = list(df.columns)
    _check_header(columns)
    if df.empty:
        raise ParseError("measurement file has no data rows", row=2)

    for col in columns:
        numeric = pd.to_numeric(df[col], errors="coerce")
        bad = numeric.isna() | ~np.isfinite(numeric.astype(float))
        if bad.any():
            line = int(np.flatnonzero(bad.to_numpy())[0]) + 2
            raise ParseError("value is missing or not a finite number", row=line, column=col)
        df[col] = numeric.astype(float)

    times = df["t_min"].to_numpy()
    steps = np.diff(times)
    if np.any(steps <= 0):
        line = int(np.flatnonzero(steps <= 0)[0]) + 3
        raise NonMonotoneTimeError(f"t_min must be strictly increasing (row {line})")
    for col in columns:
        negative = df[col].to_numpy() < 0
        if negative.any():
            line = int(np.flatnonzero(negative)[0]) + 2
            raise NegativeValueError(f"negative value in column '{col}' (row {line})")

    has_err = columns[len(MEASUREMENT_COLUMNS):] == ERROR_COLUMNS
    data = MeasurementSet(
        schedule=AcquisitionSchedule(times),
        kidney=df["kidney"].to_numpy(),
        bladder=df["bladder"].to_numpy(),
        blood=df["blood"].to_numpy(),
        kidney_err=df["kidney_err"].to_numpy() if has_err else None,
        bladder_err=df["bladder_err"].to_numpy() if has_err else None,
    )
    logger.info("loaded %d frames from %s", len(data), path)
    return data


def measurements_frame(data: MeasurementSet) -> pd.DataFrame:
    df = pd.DataFrame(
        {
            "t_min": data.times,
            "blood": data.blood,
            "kidney": data.kidney,
            "bladder": data.bladder,
        }
    )
    if data.kidney_err is not None and data.bladder_err is not None:
        df["kidney_err"] = data.kidney_err
        df["bladder_err"] = data.bladder_err
    return df


def save_measurements(data: MeasurementSet, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    measurements_frame(data).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


# -----------------------------
# Ensemble results
# -----------------------------
def coefficients_frame(result) -> pd.DataFrame:
    return pd.DataFrame([result.mean, result.std], index=["mean", "std"], columns=list(RATE_NAMES))


def strips_frame(result) -> pd.DataFrame:
    width = len(str(result.n_runs))
    frame = {
        "t_min": result.data.times,
        "kidney_data": result.kidney_target,
        "bladder_data": result.data.bladder,
    }
    for i in range(result.n_runs):
        frame[f"kidney_run{i + 1:0{max(2, width)}d}"] = result.kidney_strips[i]
    for i in range(result.n_runs):
        frame[f"bladder_run{i + 1:0{max(2, width)}d}"] = result.bladder_strips[i]
    return pd.DataFrame(frame)


def runs_frame(result) -> pd.DataFrame:
    rows = []
    for run in result.runs:
        row = {"seed": run.seed, **run.rates.as_dict()}
        row.update(
            cost=run.cost,
            iterations=run.iterations,
            restarts=run.restarts,
            converged=run.converged,
            case=run.case.value,
        )
        rows.append(row)
    return pd.DataFrame(rows)


def runs_document(result) -> dict:
    return {
        "schema": RUNS_SCHEMA,
        "rate_names": list(RATE_NAMES),
        "aco": result.config.as_dict(),
        "initial_values": result.initial.as_dict() if result.initial is not None else None,
        "runs": [
            {
                "seed": run.seed,
                "rates": run.rates.as_dict(),
                "cost": run.cost,
                "iterations": run.iterations,
                "restarts": run.restarts,
                "converged": run.converged,
                "case": run.case.value,
            }
            for run in result.runs
        ],
    }


def emit_results(result, out_dir) -> list:
    """Write coefficients.csv, strips.csv and runs.json; return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / "coefficients.csv", out_dir / "strips.csv", out_dir / "runs.json"]
    coefficients_frame(result).to_csv(paths[0], index_label="stat", float_format=FLOAT_FORMAT)
    strips_frame(result).to_csv(paths[1], index=False, float_format=FLOAT_FORMAT)
    with open(paths[2], "w", encoding="utf-8") as fh:
        json.dump(runs_document(result), fh, indent=2)
        fh.write("\n")
    logger.info("wrote %s", ", ".join(str(p) for p in paths))
    return paths
