"""Ranking quality and provider coverage metrics."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import math
from collections import defaultdict
from collections.abc import Collection, Mapping, Sequence
from typing import NamedTuple

import config
from types_faircover import ProviderCatalog, RatingsDataset, RerankedList


def relevant_items(
    test: RatingsDataset, threshold: float = config.RELEVANCE_THRESHOLD
) -> dict[str, set[str]]:
    """Map each test user to the items rated at least `threshold`."""
    relevant: dict[str, set[str]] = defaultdict(set)
    for rating in test.ratings:
        if rating.value >= threshold:
            relevant[rating.user].add(rating.item)
    return dict(relevant)


def _ndcg(items: Sequence[str], relevant: Collection[str], k: int) -> float | None:
    """Binary-gain nDCG of the first k items; None when nothing is relevant.

    >>> round(_ndcg(["x", "a"], {"a"}, 2), 4)
    0.6309
    >>> _ndcg(["x"], set(), 1) is None
    True
    """
    if not relevant:
        return None
    dcg = sum(
        1 / math.log2(position + 1)
        for position, item in enumerate(items[:k], start=1)
        if item in relevant
    )
    ideal = sum(1 / math.log2(j + 1) for j in range(1, min(k, len(relevant)) + 1))
    return dcg / ideal


def ndcg_at_k(
    ranked: RerankedList,
    test: RatingsDataset,
    k: int,
    relevance_threshold: float = config.RELEVANCE_THRESHOLD,
) -> float | None:
    """nDCG@k of one re-ranked list against the user's test ratings.

    Returns None for a user with no relevant test item; such users are left
    out of averages.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    relevant = {
        r.item
        for r in test.ratings
        if r.user == ranked.user and r.value >= relevance_threshold
    }
    return _ndcg(ranked.items, relevant, k)


def mean_ndcg(
    lists: Mapping[str, RerankedList],
    relevant: Mapping[str, Collection[str]],
    k: int,
) -> tuple[float, int]:
    """Average nDCG over scorable users; also return how many were unscored."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    values, unscored = [], 0
    for user, ranked in lists.items():
        value = _ndcg(ranked.items, relevant.get(user, ()), k)
        if value is None:
            unscored += 1
        else:
            values.append(value)
    return (math.fsum(values) / len(values) if values else 0.0), unscored


def covered_providers(items: Sequence[str], catalog: ProviderCatalog) -> set[str]:
    return {provider for item in items for provider in catalog.owners(item)}


def apcr(lists: Mapping[str, RerankedList], catalog: ProviderCatalog) -> float:
    """Average provider coverage rate: Σ_u N_S(u) / (c·|U|).

    >>> from types_faircover import make_catalog
    >>> cat = make_catalog([(f"i{j}", f"d{j}") for j in range(10)])
    >>> lists = {
    ...     "u1": RerankedList("u1", ("i0", "i1"), frozenset()),
    ...     "u2": RerankedList("u2", tuple(f"i{j}" for j in range(6)), frozenset()),
    ... }
    >>> apcr(lists, cat)
    0.4
    """
    if not lists:
        raise ValueError("APCR needs at least one list")
    covered = sum(len(covered_providers(s.items, catalog)) for s in lists.values())
    return covered / (catalog.c * len(lists))


def provider_histogram(
    lists: Mapping[str, RerankedList], catalog: ProviderCatalog
) -> dict[str, int]:
    """Count listed items per owning provider, zeros included, in catalog order.

    >>> from types_faircover import make_catalog
    >>> cat = make_catalog([("i", "d1"), ("i", "d2"), ("j", "d3")])
    >>> provider_histogram({"u": RerankedList("u", ("i",), frozenset())}, cat)
    {'d1': 1, 'd2': 1, 'd3': 0}
    """
    counts = dict.fromkeys(catalog.providers, 0)
    for ranked in lists.values():
        for item in ranked.items:
            for provider in catalog.owners(item):
                counts[provider] += 1
    return counts


def provider_inventory(
    catalog: ProviderCatalog, items: Collection[str] | None = None
) -> dict[str, int]:
    """Items per provider, optionally restricted to `items`."""
    counts = dict.fromkeys(catalog.providers, 0)
    for item, owners in catalog.ownership.items():
        if items is not None and item not in items:
            continue
        for provider in owners:
            counts[provider] += 1
    return counts


class ExposureRow(NamedTuple):
    provider: str
    count: int
    base_count: int
    share: float
    inventory: int
    inventory_share: float
    exposure_ratio: float


def _shares(counts: Mapping[str, int]) -> dict[str, float]:
    total = sum(counts.values())
    return {d: (n / total if total else 0.0) for d, n in counts.items()}


def exposure_table(
    counts: Mapping[str, int],
    base_counts: Mapping[str, int],
    inventory: Mapping[str, int],
) -> list[ExposureRow]:
    """Recommendation share against inventory share for each provider.

    An exposure ratio below 1 means the provider is recommended less often
    than its share of the catalog; it is 0 for providers without inventory.

    >>> row = exposure_table({"a": 1, "b": 3}, {"a": 0, "b": 4}, {"a": 1, "b": 1})[0]
    >>> row.share, row.inventory_share, row.exposure_ratio
    (0.25, 0.5, 0.5)
    """
    share = _shares(counts)
    inventory_share = _shares(inventory)
    return [
        ExposureRow(
            provider,
            counts[provider],
            base_counts.get(provider, 0),
            share[provider],
            inventory.get(provider, 0),
            inventory_share.get(provider, 0.0),
            (
                share[provider] / inventory_share[provider]
                if inventory_share.get(provider, 0.0)
                else 0.0
            ),
        )
        for provider in counts
    ]
