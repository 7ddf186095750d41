"""Parameter sweeps over the GHZ(theta) and Werner(p) families, plus CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from typing import Sequence

import numpy as np

from .bounds import geur_report, key_rate_report
from .errors import DomainError
from .measure import MeasurementAssignment, ProjectiveMeasurement, pauli
from .states import ghz4_theta, werner3

FIG3_COLUMNS = (
    "theta",
    "lhs_total",
    "b_mu",
    "delta3_raw",
    "delta3_clamped",
    "new_bound",
    "rb_bound",
    "slack_new",
    "slack_rb",
)
FIG4_COLUMNS = ("p", "q_mu", "delta_raw", "k_old_bilateral", "k_new_bilateral", "improvement")

DEFAULT_PAIRING = "X:B,Y:C,Z:D"
HALF_PI = math.pi / 2


def linear_grid(start: float, end: float, points: int, lo: float, hi: float) -> np.ndarray:
    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    if not start < end:
        raise DomainError(f"grid start {start} must be below end {end}")
    # a rounded pi/2 typed on the command line may overshoot slightly
    if start < lo - 1e-12 or end > hi + 1e-9:
        raise DomainError(f"grid [{start}, {end}] leaves the domain [{lo}, {hi}]")
    grid = np.linspace(start, end, points)
    return np.clip(grid, lo, hi)


def fig3_rows(thetas: Sequence[float], assignment: MeasurementAssignment | None = None) -> list[dict]:
    assignment = assignment or MeasurementAssignment.parse(DEFAULT_PAIRING)
    rows = []
    for theta in thetas:
        rep = geur_report(ghz4_theta(float(theta)), assignment)
        rows.append(
            {
                "theta": float(theta),
                "lhs_total": rep.lhs_total,
                "b_mu": rep.b_mu,
                "delta3_raw": rep.delta_n,
                "delta3_clamped": max(0.0, rep.delta_n),
                "new_bound": rep.new_bound,
                "rb_bound": rep.rb_bound,
                "slack_new": rep.slack_new,
                "slack_rb": rep.slack_rb,
            }
        )
    return rows


def fig4_rows(
    ps: Sequence[float],
    r: ProjectiveMeasurement | None = None,
    k: ProjectiveMeasurement | None = None,
) -> list[dict]:
    r = r or pauli("Y")
    k = k or pauli("Z")
    rows = []
    for p in ps:
        rep = key_rate_report(werner3(float(p)), r, k, "A", "B", "D")
        rows.append(
            {
                "p": float(p),
                "q_mu": rep.q_mu,
                "delta_raw": rep.delta,
                "k_old_bilateral": rep.k_old_bilateral,
                "k_new_bilateral": rep.k_new_bilateral,
                "improvement": rep.improvement,
            }
        )
    return rows


def fmt(x: float) -> str:
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def render(rows: list[dict], columns: Sequence[str], fmt_name: str, schema: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row[c]) for c in columns])
        return buf.getvalue()
    if fmt_name == "json":
        doc = {"schema": schema, "columns": list(columns), "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt_name!r}")


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".geur-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

