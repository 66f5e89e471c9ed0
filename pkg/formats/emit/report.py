"""Emit sweep reports and their summaries as CSV.

Every file has a header row and uses `.` as decimal point regardless of
locale.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from errors import DataFormatError
from evaluate.metrics import ExposureRow
from evaluate.sweep import BudgetChoice, TradeoffPoint
from types_faircover import SweepReport, SweepRow

REPORT_COLUMNS = ["lambda", "mean_ndcg", "apcr"]


def _write(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, lineterminator="\n")
    log.info(f"wrote {path} ({len(frame)} rows)")


def emit_report(report: SweepReport, path: Path) -> None:
    """One row per λ: lambda, mean_ndcg, apcr, then a count column per provider."""
    providers = list(report.rows[0].provider_counts) if report.rows else []
    records = [
        [row.lam, row.mean_ndcg, row.apcr]
        + [row.provider_counts.get(provider, 0) for provider in providers]
        for row in report.rows
    ]
    _write(pd.DataFrame(records, columns=REPORT_COLUMNS + providers), path)


def read_report(path: Path, mode: str = "", dataset: str = "") -> SweepReport:
    """Read a report written by emit_report."""
    frame = pd.read_csv(path)
    if list(frame.columns[:3]) != REPORT_COLUMNS:
        raise DataFormatError(
            f"{path}: header must start with {','.join(REPORT_COLUMNS)}"
        )
    providers = [str(column) for column in frame.columns[3:]]
    rows = tuple(
        SweepRow(
            float(record["lambda"]),
            float(record["mean_ndcg"]),
            float(record["apcr"]),
            {provider: int(record[provider]) for provider in providers},
        )
        for record in frame.to_dict("records")
    )
    return SweepReport(dataset or Path(path).stem, "", mode, 0, rows)


def emit_summary(choice: BudgetChoice, budget: float, path: Path) -> None:
    """The APCR@nDCG budget choice as a one-row table."""
    frame = pd.DataFrame(
        [[budget, choice.lam, choice.apcr, 100 * choice.relative_gain]],
        columns=["budget", "lambda_star", "apcr", "relative_gain_pct"],
    )
    _write(frame, path)


def emit_tradeoff(points: Sequence[TradeoffPoint], path: Path) -> None:
    frame = pd.DataFrame(
        [tuple(point) for point in points],
        columns=["lambda", "ndcg_change_pct", "apcr_change_pct"],
    )
    _write(frame, path)


def emit_histogram(rows: Sequence[ExposureRow], path: Path) -> None:
    """Provider counts at the chosen λ beside the λ=0 counts and inventory."""
    _write(pd.DataFrame([tuple(row) for row in rows], columns=ExposureRow._fields), path)


def histogram_name(lam: float) -> str:
    """
    >>> histogram_name(0.45)
    'histogram_lambda_0.45.csv'
    """
    return f"histogram_lambda_{lam:g}.csv"
