#!/usr/bin/env python3
#
# This file is part of faircover
# Licensed under the GPLv3, see <http://www.gnu.org/licenses/gpl-3.0.html>
#
"""Test nDCG, APCR, histograms, sweeps and the budget summary."""

import math

import numpy as np
import pytest

from evaluate.metrics import (
    apcr,
    exposure_table,
    mean_ndcg,
    ndcg_at_k,
    provider_histogram,
    provider_inventory,
    relevant_items,
)
from evaluate.sweep import (
    apcr_at_ndcg_budget,
    check_grid,
    dominance_fraction,
    lambda_grid,
    lambda_sweep,
    merge_fold_reports,
    sweep_point,
    sweep_report as collect_points,
    tradeoff_curve,
)
from formats.emit.report import emit_report, read_report
from types_faircover import (
    RerankedList,
    SweepReport,
    SweepRow,
    make_catalog,
    make_dataset,
    make_rerank_params,
    make_scored_list,
)

TEN = make_catalog([(f"i{j}", f"d{j}") for j in range(10)])


def listed(user, *items):
    return RerankedList(user, tuple(items), frozenset())


def sweep_report(rows, mode="FAR"):
    return SweepReport(
        "toy", "wrmf", mode, 1, tuple(SweepRow(*row, {}) for row in rows)
    )


def test_ndcg_all_relevant():
    test = make_dataset([("u", "a", 1), ("u", "b", 1)])
    assert ndcg_at_k(listed("u", "a", "b"), test, 2, 0) == 1.0


def test_ndcg_second_position():
    test = make_dataset([("u", "b", 3)])
    value = ndcg_at_k(listed("u", "x", "b"), test, 2, 0)
    assert abs(value - 1 / math.log2(3)) <= 1e-12
    assert round(value, 4) == 0.6309


def test_ndcg_threshold_and_exclusion():
    test = make_dataset([("u", "a", 2), ("w", "a", 5)])
    assert ndcg_at_k(listed("u", "a"), test, 1, relevance_threshold=3) is None
    assert ndcg_at_k(listed("w", "a"), test, 1, relevance_threshold=3) == 1.0
    with pytest.raises(ValueError):
        ndcg_at_k(listed("w", "a"), test, 0)


def test_mean_ndcg_skips_users_without_relevant_items():
    test = make_dataset([("u", "a", 1), ("w", "z", 0)])
    relevant = relevant_items(test, threshold=1)
    lists = {"u": listed("u", "a"), "w": listed("w", "a")}
    value, unscored = mean_ndcg(lists, relevant, 1)
    assert value == 1.0
    assert unscored == 1


def test_ndcg_in_unit_interval():
    rng = np.random.default_rng(3)
    for _ in range(200):
        items = [f"i{j}" for j in rng.permutation(12)[:5]]
        relevant = {f"i{j}" for j in range(12) if rng.random() < 0.4}
        test = make_dataset([("u", item, 1) for item in sorted(relevant)])
        value = ndcg_at_k(listed("u", *items), test, 5)
        assert value is None or 0 <= value <= 1


def test_apcr_examples():
    assert apcr({"u": listed("u", "i0", "i1", "i2", "i3")}, TEN) == 0.4
    two = {"u": listed("u", "i0", "i1"), "w": listed("w", *[f"i{j}" for j in range(6)])}
    assert abs(apcr(two, TEN) - 0.4) <= 1e-12
    full = {"u": listed("u", *[f"i{j}" for j in range(10)])}
    assert apcr(full, TEN) == 1.0
    with pytest.raises(ValueError):
        apcr({}, TEN)


def test_histogram_counts_every_owner():
    catalog = make_catalog([("i1", "d1"), ("i2", "d1"), ("i3", "d1"), ("i3", "d2")])
    assert provider_histogram({"u": listed("u", "i1", "i2")}, catalog) == {
        "d1": 2,
        "d2": 0,
    }
    lists = {"u": listed("u", "i3"), "w": listed("w", "i1", "i3")}
    counts = provider_histogram(lists, catalog)
    assert counts == {"d1": 3, "d2": 2}
    owners = sum(len(catalog.owners(i)) for s in lists.values() for i in s.items)
    assert sum(counts.values()) == owners


def test_inventory_and_exposure():
    catalog = make_catalog([("i1", "d1"), ("i2", "d1"), ("i3", "d2"), ("i3", "d3")])
    inventory = provider_inventory(catalog)
    assert inventory == {"d1": 2, "d2": 1, "d3": 1}
    assert provider_inventory(catalog, {"i1"}) == {"d1": 1, "d2": 0, "d3": 0}
    rows = exposure_table(
        {"d1": 6, "d2": 2, "d3": 0}, {"d1": 8, "d2": 0, "d3": 0}, inventory
    )
    assert [row.provider for row in rows] == ["d1", "d2", "d3"]
    assert rows[0].share == 0.75
    assert rows[0].exposure_ratio == 1.5
    assert rows[2].exposure_ratio == 0.0
    assert rows[0].base_count == 8


def test_lambda_grid():
    grid = lambda_grid(0, 2.0, 0.05)
    assert len(grid) == 41
    assert grid[0] == 0 and grid[-1] == 2.0
    assert grid[3] == 0.15
    with pytest.raises(ValueError):
        check_grid([0.5, 1.0])
    with pytest.raises(ValueError):
        check_grid([0, 1.0, 0.5])
    with pytest.raises(ValueError):
        check_grid([])


def test_budget_example():
    report = sweep_report(
        [(0, 0.50, 0.40), (0.5, 0.48, 0.60), (1, 0.47, 0.70), (2, 0.40, 0.80)]
    )
    choice = apcr_at_ndcg_budget(report, 0.05)
    assert (choice.lam, choice.apcr) == (0.5, 0.60)
    assert choice.relative_gain == pytest.approx(0.5)


def test_budget_zero_returns_base_on_decreasing_ndcg():
    report = sweep_report([(0, 0.5, 0.4), (1, 0.49, 0.5), (2, 0.3, 0.9)])
    choice = apcr_at_ndcg_budget(report, 0)
    assert choice.lam == 0
    assert choice.relative_gain == 0


def test_budget_ties_prefer_smaller_lambda():
    report = sweep_report([(0, 0.5, 0.4), (1, 0.5, 0.7), (2, 0.5, 0.7)])
    assert apcr_at_ndcg_budget(report, 0.05).lam == 1


def test_budget_monotone():
    rng = np.random.default_rng(12)
    for _ in range(100):
        ndcg = np.sort(rng.uniform(0.2, 0.6, 8))[::-1]
        coverage = np.sort(rng.uniform(0.2, 0.9, 8))
        report = sweep_report(
            [(lam, n, a) for lam, n, a in zip(np.arange(8) / 4, ndcg, coverage)]
        )
        budgets = np.sort(rng.uniform(0, 0.99, 5))
        found = [apcr_at_ndcg_budget(report, b).apcr for b in budgets]
        assert found == sorted(found)
        assert all(apcr_at_ndcg_budget(report, b).relative_gain >= 0 for b in budgets)


def test_tradeoff_curve():
    report = sweep_report([(0, 0.5, 0.4), (1, 0.45, 0.6)])
    points = tradeoff_curve(report)
    assert points[0] == (0, 0.0, 0.0)
    assert points[1].ndcg_change_pct == pytest.approx(-10)
    assert points[1].apcr_change_pct == pytest.approx(50)


def test_dominance_fraction():
    a = sweep_report([(0, 0.5, 0.4), (1, 0.45, 0.7), (2, 0.4, 0.8)])
    b = sweep_report([(0, 0.5, 0.4), (1, 0.45, 0.6), (2, 0.4, 0.9)], "PFAR")
    fraction, compared = dominance_fraction(a, b)
    assert compared == 2
    assert fraction == 0.5
    assert dominance_fraction(a, a).fraction == 1.0


def test_sweep_lambda_zero_is_base():
    catalog = make_catalog([("a", "d1"), ("b", "d1"), ("c", "d2")])
    base = {"u": make_scored_list("u", [("a", 1.0), ("b", 0.5), ("c", 0.0)])}
    test = make_dataset([("u", "c", 4)])
    template = make_rerank_params(0.0, 2, "FAR", catalog)
    report = lambda_sweep(
        base, [0, 1, 2], template, {"u": 1.0}, catalog, relevant_items(test)
    )
    assert [row.lam for row in report.rows] == [0, 1, 2]
    assert report.base_row.mean_ndcg == 0.0
    assert report.base_row.apcr == 0.5
    assert report.rows[2].apcr == 1.0
    assert report.rows[2].mean_ndcg == pytest.approx(1 / math.log2(3))
    only_base = lambda_sweep(
        base, [0], template, {"u": 1.0}, catalog, relevant_items(test)
    )
    assert only_base.rows == report.rows[:1]


def test_sweep_points_evaluated_separately_match_the_sweep():
    catalog = make_catalog([("a", "d1"), ("b", "d1"), ("c", "d2"), ("d", "d3")])
    base = {
        "u": make_scored_list("u", [("a", 1.0), ("b", 0.6), ("c", 0.3), ("d", 0.0)]),
        "w": make_scored_list("w", [("b", 0.9), ("d", 0.8), ("a", 0.1)]),
    }
    relevant = relevant_items(make_dataset([("u", "c", 4), ("w", "d", 5)]))
    template = make_rerank_params(0.0, 2, "PFAR", catalog)
    tolerances = {"u": 0.4, "w": 0.9}
    grid = [0, 0.5, 1, 2]
    points = [
        sweep_point(base, lam, template, tolerances, catalog, relevant)
        for lam in reversed(grid)
    ]
    collected = collect_points(points[::-1], "PFAR", dataset="toy", cold_users=1)
    swept = lambda_sweep(
        base, grid, template, tolerances, catalog, relevant, dataset="toy", cold_users=1
    )
    assert collected == swept


def test_merge_fold_reports():
    first = SweepReport("toy", "wrmf", "FAR", 1, (SweepRow(0, 0.4, 0.5, {"d1": 3}),))
    second = SweepReport("toy", "wrmf", "FAR", 1, (SweepRow(0, 0.6, 0.7, {"d1": 2}),))
    first = first._replace(cold_users=1)
    second = second._replace(unscored_users=2)
    merged = merge_fold_reports([first, second])
    assert merged.folds == 2
    assert merged.rows[0].mean_ndcg == pytest.approx(0.5)
    assert merged.rows[0].apcr == pytest.approx(0.6)
    assert merged.rows[0].provider_counts == {"d1": 5}
    assert (merged.cold_users, merged.unscored_users) == (1, 2)


def test_report_csv_round_trip(tmp_path):
    report = SweepReport(
        "toy",
        "wrmf",
        "FAR",
        1,
        (
            SweepRow(0.0, 0.5, 0.25, {"d1": 4, "d2": 0}),
            SweepRow(0.05, 0.375, 0.5, {"d1": 2, "d2": 2}),
        ),
    )
    path = tmp_path / "report.csv"
    emit_report(report, path)
    assert path.read_text().splitlines()[0] == "lambda,mean_ndcg,apcr,d1,d2"
    assert read_report(path).rows == report.rows


if __name__ == "__main__":
    test_budget_example()
