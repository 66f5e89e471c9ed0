#!/usr/bin/env python3
#
# This file is part of faircover
# Licensed under the GPLv3, see <http://www.gnu.org/licenses/gpl-3.0.html>
#
"""Test interest profiles, tolerance and the greedy FAR/PFAR re-ranker.

The property suites draw small random instances from a seeded generator and
compare the re-ranker with a brute-force greedy that re-scores every
remaining candidate from scratch at every step.
"""

import itertools
import math

import numpy as np
import pytest

from errors import DataFormatError, UnownedItemError
from rerank.far import (
    CoverageState,
    check_catalog_coverage,
    fairness_bonus,
    load_provider_weights,
    rerank,
    rerank_all,
)
from rerank.tolerance import (
    compute_interest,
    compute_interests,
    compute_tolerance,
    tolerance_profiles,
)
from types_faircover import (
    ProviderCatalog,
    ScoredList,
    make_catalog,
    make_dataset,
    make_rerank_params,
    make_scored_list,
    uniform_weights,
)

#################################################################
# Interest and tolerance
#################################################################


def test_interest_symmetric():
    train = make_dataset([("u", "v1", 4), ("u", "v2", 4)])
    catalog = make_catalog([("v1", "d1"), ("v2", "d2")])
    assert compute_interest(train, catalog, "u") == {"d1": 0.5, "d2": 0.5}


def test_interest_single_provider():
    train = make_dataset([("u", "v1", 3)])
    catalog = make_catalog([("v1", "d")])
    assert compute_interest(train, catalog, "u") == {"d": 1.0}


def test_interest_multi_owner_counts_once_per_owner():
    train = make_dataset([("u", "v1", 2), ("u", "v2", 2)])
    catalog = make_catalog([("v1", "d1"), ("v1", "d2"), ("v2", "d1")])
    interest = compute_interest(train, catalog, "u")
    assert interest["d1"] == pytest.approx(4 / 6, abs=1e-12)
    assert interest["d2"] == pytest.approx(2 / 6, abs=1e-12)


def test_interest_zero_mass_is_cold():
    train = make_dataset([("u", "v1", 0)])
    catalog = make_catalog([("v1", "d1")])
    assert compute_interest(train, catalog, "u") == {}
    assert compute_tolerance({}, 4) == 2.0
    assert compute_tolerance({}, 4, fallback=0.5) == 0.5


def test_interests_batch_matches_single():
    train = make_dataset(
        [("u1", "v1", 1), ("u1", "v2", 3), ("u2", "v2", 2), ("u2", "v3", 5)]
    )
    catalog = make_catalog([("v1", "d1"), ("v2", "d2"), ("v3", "d1"), ("v3", "d3")])
    batch = compute_interests(train, catalog)
    for user in train.users:
        assert batch[user] == compute_interest(train, catalog, user)


def test_tolerance_examples():
    assert compute_tolerance({"d": 1.0}, 3) == 0.0
    assert compute_tolerance({"d1": 0.5, "d2": 0.5}, 2) == pytest.approx(1.0)
    assert compute_tolerance(
        {"d1": 0.5, "d2": 0.25, "d3": 0.25}, 3
    ) == pytest.approx(1.5, abs=1e-12)
    with pytest.raises(ValueError):
        compute_tolerance({"d1": 1.5, "d2": -0.5}, 2)


def test_tolerance_bounds():
    rng = np.random.default_rng(8)
    for _ in range(300):
        c = int(rng.integers(1, 12))
        shares = rng.dirichlet(np.ones(c))
        interest = {f"d{j}": float(s) for j, s in enumerate(shares) if s > 0}
        tau = compute_tolerance(interest, c)
        assert 0 <= tau <= math.log2(c)
        uniform = {f"d{j}": 1 / c for j in range(c)}
        assert abs(compute_tolerance(uniform, c) - math.log2(c)) <= 1e-12
        assert compute_tolerance({"d0": 1.0}, c) == 0.0


def test_tolerance_normalized():
    assert compute_tolerance({"d1": 0.5, "d2": 0.5}, 2, normalize=True) == 1.0
    assert compute_tolerance({"d1": 0.5, "d2": 0.5}, 4, normalize=True) == 0.5
    assert compute_tolerance({"d1": 1.0}, 1, normalize=True) == 0.0


def test_tolerance_profiles():
    train = make_dataset([("u1", "v1", 1), ("u1", "v2", 1), ("u2", "v1", 2)])
    catalog = make_catalog([("v1", "d1"), ("v2", "d2")])
    profiles = tolerance_profiles(train, catalog)
    assert profiles["u1"].tolerance == pytest.approx(1.0)
    assert profiles["u2"].tolerance == 0.0


#################################################################
# Fairness bonus and worked examples
#################################################################

CAT2 = make_catalog([("a", "d1"), ("b", "d1"), ("c", "d2")])
BASE = make_scored_list("u", [("a", 0.9), ("b", 0.8), ("c", 0.7)])


def test_fairness_bonus_examples():
    weights = uniform_weights(CAT2)
    assert fairness_bonus("a", CoverageState(), CAT2, weights) == 0.5
    assert fairness_bonus("a", CoverageState(frozenset({"d1"})), CAT2, weights) == 0
    cat4 = make_catalog([("v", "d1"), ("v", "d2"), ("w", "d3"), ("x", "d4")])
    state = CoverageState().cover(["d1"])
    assert fairness_bonus("v", state, cat4, uniform_weights(cat4)) == 0.25
    with pytest.raises(UnownedItemError):
        fairness_bonus("zz", state, cat4, uniform_weights(cat4))


def test_rerank_worked_examples():
    far = make_rerank_params(1.0, 2, "FAR", CAT2)
    result = rerank(BASE, far, 1.0, CAT2)
    assert result.items == ("a", "c")
    assert result.covered_providers == {"d1", "d2"}
    assert rerank(BASE, far._replace(lam=0.1), 1.0, CAT2).items == ("a", "b")


def test_rerank_zero_tolerance_is_base_order():
    pfar = make_rerank_params(5.0, 2, "PFAR", CAT2)
    assert rerank(BASE, pfar, 0.0, CAT2).items == ("a", "b")


def test_far_ignores_tolerance():
    far = make_rerank_params(1.0, 2, "FAR", CAT2)
    assert rerank(BASE, far, 0.0, CAT2).items == ("a", "c")


def test_rerank_k_truncates_to_list_length():
    far = make_rerank_params(1.0, 10, "FAR", CAT2)
    assert sorted(rerank(BASE, far, 1.0, CAT2).items) == ["a", "b", "c"]


def test_rerank_errors():
    far = make_rerank_params(1.0, 2, "FAR", CAT2)
    with pytest.raises(ValueError):
        rerank(ScoredList("u", ()), far, 1.0, CAT2)
    stranger = make_scored_list("u", [("a", 0.9), ("zz", 0.5)])
    with pytest.raises(UnownedItemError):
        check_catalog_coverage({"u": stranger}, CAT2)


def test_rerank_all_uses_user_tolerance():
    pfar = make_rerank_params(1.0, 2, "PFAR", CAT2)
    lists = {"u": BASE, "w": BASE._replace(user="w")}
    reranked = rerank_all(lists, pfar, {"u": 1.0, "w": 0.0}, CAT2)
    assert reranked["u"].items == ("a", "c")
    assert reranked["w"].items == ("a", "b")


def test_load_provider_weights(tmp_path):
    path = tmp_path / "weights.tsv"
    path.write_text("d1\t3\nd2\t1\n")
    assert load_provider_weights(path, CAT2) == {"d1": 0.75, "d2": 0.25}
    path.write_text("d1\t1\n")
    assert load_provider_weights(path, CAT2) == {"d1": 1.0, "d2": 0.0}
    path.write_text("d9\t1\n")
    with pytest.raises(DataFormatError, match="unknown provider"):
        load_provider_weights(path, CAT2)
    path.write_text("d1\t-1\n")
    with pytest.raises(DataFormatError):
        load_provider_weights(path, CAT2)


#################################################################
# Property suites
#################################################################


def oracle(ranking, catalog, weights, lam, tau, k):
    """Greedy selection re-scoring every remaining candidate each step."""
    remaining = list(range(len(ranking.entries)))
    covered: set[str] = set()
    chosen = []
    while remaining and len(chosen) < k:
        best, best_value = None, None
        for j in remaining:
            entry = ranking.entries[j]
            bonus = sum(
                weights[d] for d in catalog.owners(entry.item) if d not in covered
            )
            value = entry.score + lam * tau * bonus
            if best is None or value > best_value:
                best, best_value = j, value
        remaining.remove(best)
        chosen.append(ranking.entries[best].item)
        covered.update(catalog.owners(ranking.entries[best].item))
    return tuple(chosen)


def random_instance(rng, max_items=10, max_providers=4, ties=False):
    n = int(rng.integers(1, max_items + 1))
    c = int(rng.integers(1, max_providers + 1))
    providers = [f"d{j}" for j in range(c)]
    pairs = []
    for i in range(n):
        owners = rng.choice(c, size=int(rng.integers(1, c + 1)), replace=False)
        pairs += [(f"v{i}", providers[j]) for j in owners]
    catalog = make_catalog(pairs, providers)
    if ties:
        scores = rng.integers(0, 4, size=n) / 4
    else:
        scores = rng.random(n)
    ranking = make_scored_list("u", zip([f"v{i}" for i in range(n)], scores))
    return ranking, catalog


def random_weights(rng, catalog: ProviderCatalog):
    if rng.random() < 0.5:
        return uniform_weights(catalog)
    shares = rng.dirichlet(np.ones(catalog.c))
    return dict(zip(catalog.providers, (float(s) for s in shares)))


def test_greedy_matches_oracle():
    rng = np.random.default_rng(20190701)
    for trial in range(1000):
        ranking, catalog = random_instance(rng, ties=trial % 3 == 0)
        weights = random_weights(rng, catalog)
        lam = float(rng.uniform(0, 3))
        tau = float(rng.uniform(0, 2))
        k = int(rng.integers(1, 12))
        params = make_rerank_params(lam, k, "PFAR", catalog, weights)
        got = rerank(ranking, params, tau, catalog).items
        assert got == oracle(ranking, catalog, weights, lam, tau, k), trial


def test_lambda_zero_keeps_base_prefix():
    rng = np.random.default_rng(500)
    for trial in range(500):
        ranking, catalog = random_instance(rng, ties=trial % 2 == 0)
        k = int(rng.integers(1, 12))
        mode = "FAR" if trial % 2 else "PFAR"
        params = make_rerank_params(0.0, k, mode, catalog, random_weights(rng, catalog))
        result = rerank(ranking, params, float(rng.uniform(0, 2)), catalog)
        assert result.items == ranking.items[:k]


def test_output_subset_without_duplicates():
    rng = np.random.default_rng(77)
    for _ in range(300):
        ranking, catalog = random_instance(rng)
        params = make_rerank_params(float(rng.uniform(0, 5)), 5, "FAR", catalog)
        result = rerank(ranking, params, 1.0, catalog)
        assert len(set(result.items)) == len(result.items)
        assert set(result.items) <= set(ranking.items)
        covered = {d for item in result.items for d in catalog.owners(item)}
        assert result.covered_providers == covered


def _check_saturation(ranking, catalog, k):
    lam = 1.01 * catalog.c  # λ·τ·(1/c) > 1 with τ = 1
    params = make_rerank_params(lam, k, "FAR", catalog)
    result = rerank(ranking, params, 1.0, catalog)
    covered: set[str] = set()
    remaining = set(ranking.items)
    for item in result.items:
        can_cover = any(set(catalog.owners(v)) - covered for v in remaining)
        if can_cover:
            assert set(catalog.owners(item)) - covered
        covered.update(catalog.owners(item))
        remaining.discard(item)
    return result, covered


def test_coverage_saturation_single_owner_exhaustive():
    for c in range(1, 5):
        providers = [f"d{j}" for j in range(c)]
        for z in range(1, 9):
            items = [f"v{i}" for i in range(z)]
            scores = np.linspace(1.0, 0.0, z) if z > 1 else np.ones(1)
            ranking = make_scored_list("u", zip(items, scores))
            for assignment in itertools.product(range(c), repeat=z):
                if z > 6 and assignment[0] != 0:
                    continue  # relabeling symmetry: fix the first owner
                catalog = make_catalog(
                    zip(items, (providers[j] for j in assignment)), providers
                )
                k = max(1, z // 2)
                _, covered = _check_saturation(ranking, catalog, k)
                reachable = len(set(assignment))
                assert len(covered) == min(reachable, k)


def test_coverage_saturation_multi_owner():
    rng = np.random.default_rng(31)
    for _ in range(500):
        ranking, catalog = random_instance(rng, max_items=8)
        _check_saturation(ranking, catalog, int(rng.integers(1, 9)))


def test_far_equals_pfar_with_unit_tolerance():
    rng = np.random.default_rng(100)
    for _ in range(100):
        ranking, catalog = random_instance(rng)
        weights = random_weights(rng, catalog)
        lam, k = float(rng.uniform(0, 3)), int(rng.integers(1, 11))
        far = make_rerank_params(lam, k, "FAR", catalog, weights)
        pfar = far._replace(mode="PFAR")
        assert rerank(ranking, far, 0.3, catalog) == rerank(ranking, pfar, 1.0, catalog)


def test_affine_rescaling_of_scores():
    rng = np.random.default_rng(42)
    for _ in range(300):
        ranking, catalog = random_instance(rng)
        a, b = float(rng.uniform(0.1, 10)), float(rng.uniform(-5, 5))
        lam, tau = float(rng.uniform(0.01, 3)), float(rng.uniform(0.1, 2))
        scaled = ScoredList(
            ranking.user,
            tuple(e._replace(score=a * e.score + b) for e in ranking.entries),
        )
        k = int(rng.integers(1, 11))
        weights = random_weights(rng, catalog)
        params = make_rerank_params(lam, k, "PFAR", catalog, weights)
        shrunk = params._replace(lam=lam / a)
        assert (
            rerank(scaled, params, tau, catalog).items
            == rerank(ranking, shrunk, tau, catalog).items
        )


if __name__ == "__main__":
    test_greedy_matches_oracle()
