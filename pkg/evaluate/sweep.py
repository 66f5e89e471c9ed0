"""λ sweeps, cross-fold aggregation and trade-off summaries.

A sweep re-ranks the same base lists at every grid value and records mean
nDCG, APCR and the provider histogram. The budget summary picks the row with
the best coverage whose nDCG stays within a fraction of the base row's.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
import math
from collections.abc import Mapping, Sequence
from typing import NamedTuple

import numpy as np

import config
from rerank.far import rerank_all
from types_faircover import (
    ProviderCatalog,
    RerankParams,
    ScoredList,
    SweepReport,
    SweepRow,
)

from .metrics import apcr, mean_ndcg, provider_histogram


def lambda_grid(
    start: float = config.LAMBDA_START,
    stop: float = config.LAMBDA_STOP,
    step: float = config.LAMBDA_STEP,
) -> list[float]:
    """Return start, start+step, ... up to stop inclusive.

    >>> lambda_grid(0, 0.2, 0.05)
    [0.0, 0.05, 0.1, 0.15, 0.2]
    """
    if step <= 0 or stop < start:
        raise ValueError(f"bad grid {start=} {stop=} {step=}")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, config.LAMBDA_DECIMALS) for i in range(count + 1)]


def check_grid(grid: Sequence[float]) -> None:
    if not grid:
        raise ValueError("λ grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:], strict=False)):
        raise ValueError(f"λ grid must be strictly ascending: {list(grid)}")
    if 0 not in grid:
        raise ValueError("λ grid must contain 0")
    if grid[0] < 0:
        raise ValueError("λ values must be non-negative")


class SweepPoint(NamedTuple):
    """One λ of one fold: the report row and the users nDCG skipped."""

    row: SweepRow
    unscored: int


def sweep_point(
    base_lists: Mapping[str, ScoredList],
    lam: float,
    template: RerankParams,
    tolerances: Mapping[str, float],
    catalog: ProviderCatalog,
    relevant: Mapping[str, set[str]],
) -> SweepPoint:
    """Re-rank every base list at one λ and evaluate the result."""
    params = template._replace(lam=float(lam))
    lists = rerank_all(base_lists, params, tolerances, catalog)
    ndcg, unscored = mean_ndcg(lists, relevant, params.k)
    row = SweepRow(
        float(lam), ndcg, apcr(lists, catalog), provider_histogram(lists, catalog)
    )
    log.debug(f"λ={row.lam:g}: nDCG {row.mean_ndcg:.4f}, APCR {row.apcr:.4f}")
    return SweepPoint(row, unscored)


def sweep_report(
    points: Sequence[SweepPoint],
    mode: str,
    relevance_threshold: float = config.RELEVANCE_THRESHOLD,
    dataset: str = "",
    recommender: str = "",
    cold_users: int = 0,
) -> SweepReport:
    """Collect one fold's points, in grid order, into a report."""
    return SweepReport(
        dataset,
        recommender,
        mode,
        1,
        tuple(point.row for point in points),
        relevance_threshold,
        cold_users,
        points[-1].unscored if points else 0,
    )


def lambda_sweep(
    base_lists: Mapping[str, ScoredList],
    grid: Sequence[float],
    template: RerankParams,
    tolerances: Mapping[str, float],
    catalog: ProviderCatalog,
    relevant: Mapping[str, set[str]],
    relevance_threshold: float = config.RELEVANCE_THRESHOLD,
    dataset: str = "",
    recommender: str = "",
    cold_users: int = 0,
) -> SweepReport:
    """Re-rank and evaluate at every λ of the grid.

    `template` supplies K, mode and provider weights; `relevant` holds each
    test user's relevant items (see evaluate.metrics.relevant_items).
    """
    check_grid(grid)
    if not base_lists:
        raise ValueError("no base lists to re-rank")
    points = [
        sweep_point(base_lists, lam, template, tolerances, catalog, relevant)
        for lam in grid
    ]
    return sweep_report(
        points, template.mode, relevance_threshold, dataset, recommender, cold_users
    )


def merge_fold_reports(reports: Sequence[SweepReport]) -> SweepReport:
    """Average nDCG and APCR over folds; sum provider counts and user tallies."""
    if not reports:
        raise ValueError("no fold reports to merge")
    first = reports[0]
    grid = [row.lam for row in first.rows]
    for report in reports[1:]:
        if [row.lam for row in report.rows] != grid:
            raise ValueError("fold reports were swept over different λ grids")
    rows = []
    for i, lam in enumerate(grid):
        fold_rows = [report.rows[i] for report in reports]
        counts = dict.fromkeys(first.rows[i].provider_counts, 0)
        for row in fold_rows:
            for provider, n in row.provider_counts.items():
                counts[provider] = counts.get(provider, 0) + n
        rows.append(
            SweepRow(
                lam,
                math.fsum(row.mean_ndcg for row in fold_rows) / len(fold_rows),
                math.fsum(row.apcr for row in fold_rows) / len(fold_rows),
                counts,
            )
        )
    return first._replace(
        folds=sum(report.folds for report in reports),
        rows=tuple(rows),
        cold_users=sum(report.cold_users for report in reports),
        unscored_users=sum(report.unscored_users for report in reports),
    )


class BudgetChoice(NamedTuple):
    lam: float
    apcr: float
    relative_gain: float
    mean_ndcg: float


def apcr_at_ndcg_budget(
    report: SweepReport, budget: float = config.NDCG_BUDGET
) -> BudgetChoice:
    """Best APCR among rows keeping nDCG ≥ (1 - budget)·base nDCG.

    Ties go to the smaller λ. The λ=0 row always qualifies.

    >>> rows = [SweepRow(lam, n, a, {}) for lam, n, a in
    ...         [(0, .50, .40), (.5, .48, .60), (1, .47, .70), (2, .40, .80)]]
    >>> report = SweepReport("", "", "FAR", 1, tuple(rows))
    >>> choice = apcr_at_ndcg_budget(report, 0.05)
    >>> choice.lam, choice.apcr
    (0.5, 0.6)
    """
    if not 0 <= budget < 1:
        raise ValueError(f"budget must be in [0, 1), got {budget}")
    base = report.base_row
    floor = (1 - budget) * base.mean_ndcg
    best = base
    for row in sorted(report.rows, key=lambda row: row.lam):
        if row.mean_ndcg >= floor and row.apcr > best.apcr:
            best = row
    gain = (best.apcr - base.apcr) / base.apcr if base.apcr else 0.0
    return BudgetChoice(best.lam, best.apcr, gain, best.mean_ndcg)


class TradeoffPoint(NamedTuple):
    lam: float
    ndcg_change_pct: float
    apcr_change_pct: float


def _change_pct(value: float, base: float) -> float:
    return 100 * (value - base) / base if base else 0.0


def tradeoff_curve(report: SweepReport) -> list[TradeoffPoint]:
    """Percentage change of nDCG and APCR against the base row, per λ."""
    base = report.base_row
    return [
        TradeoffPoint(
            row.lam,
            _change_pct(row.mean_ndcg, base.mean_ndcg),
            _change_pct(row.apcr, base.apcr),
        )
        for row in report.rows
    ]


def _ndcg_loss(report: SweepReport) -> np.ndarray:
    base = report.base_row.mean_ndcg
    ndcg = np.array([row.mean_ndcg for row in report.rows])
    return (base - ndcg) / base if base else np.zeros_like(ndcg)


class Dominance(NamedTuple):
    fraction: float
    compared: int


def dominance_fraction(a: SweepReport, b: SweepReport) -> Dominance:
    """Share of A's non-base rows whose APCR is at least B's at the same nDCG loss.

    B's APCR is interpolated linearly along its loss curve; rows of A whose
    loss falls outside B's range are not compared.
    """
    loss_a = _ndcg_loss(a)
    loss_b = _ndcg_loss(b)
    apcr_b = np.array([row.apcr for row in b.rows])
    order = np.lexsort((apcr_b, loss_b))
    loss_b, apcr_b = loss_b[order], apcr_b[order]
    wins = compared = 0
    for row, loss in zip(a.rows, loss_a, strict=True):
        if row.lam == 0 or not loss_b[0] <= loss <= loss_b[-1]:
            continue
        compared += 1
        wins += row.apcr >= float(np.interp(loss, loss_b, apcr_b))
    return Dominance(wins / compared if compared else 0.0, compared)
