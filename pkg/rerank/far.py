"""Greedy fairness-aware re-ranking (FAR) and its personalized form (PFAR).

Each step picks, from the base items not yet selected, the one maximizing

    score(v) + λ·τ·Σ_{d ∈ owners(v), d not yet covered} P(d|u)

with ties going to the earlier base position. FAR uses τ = 1 for every user,
PFAR the user's entropy tolerance.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import NamedTuple

import numpy as np

import config
from errors import DataFormatError, UnownedItemError
from types_faircover import (
    ProviderCatalog,
    RerankedList,
    RerankParams,
    ScoredList,
)
from utils.text import data_lines


class CoverageState(NamedTuple):
    """Providers owning at least one item of the partial list S."""

    covered: frozenset[str] = frozenset()

    def cover(self, providers: Iterable[str]) -> "CoverageState":
        return CoverageState(self.covered | frozenset(providers))


def _bonus(
    owners: tuple[str, ...], covered: frozenset[str], weights: Mapping[str, float]
) -> float:
    return float(sum(weights[d] for d in owners if d not in covered))


def fairness_bonus(
    item: str,
    state: CoverageState,
    catalog: ProviderCatalog,
    weights: Mapping[str, float],
) -> float:
    """Sum the weights of the item's providers that S does not cover yet.

    >>> from types_faircover import make_catalog, uniform_weights
    >>> cat = make_catalog([("v", "d1"), ("v", "d2"), ("w", "d3"), ("x", "d4")])
    >>> state = CoverageState(frozenset({"d1"}))
    >>> fairness_bonus("v", state, cat, uniform_weights(cat))
    0.25
    """
    return _bonus(catalog.owners(item), state.covered, weights)


def rerank(
    ranking: ScoredList,
    params: RerankParams,
    tolerance: float,
    catalog: ProviderCatalog,
) -> RerankedList:
    """Select min(K, |R|) items from the base list greedily."""
    if not ranking.entries:
        raise ValueError(f"cannot re-rank the empty list of {ranking.user!r}")
    tau = 1.0 if params.mode == "FAR" else tolerance
    gain = params.lam * tau
    weights = params.provider_weights
    owners = [catalog.owners(item) for item in ranking.items]
    scores = np.array(ranking.scores, dtype=np.float64)
    holders: dict[str, list[int]] = {}
    for position, item_owners in enumerate(owners):
        for provider in item_owners:
            holders.setdefault(provider, []).append(position)

    state = CoverageState()
    bonus = np.array([_bonus(o, state.covered, weights) for o in owners])
    available = np.ones(len(owners), dtype=bool)
    selected = []
    for _ in range(min(params.k, len(owners))):
        criterion = np.where(available, scores + gain * bonus, -np.inf)
        pick = int(np.argmax(criterion))  # first maximum = earliest position
        selected.append(pick)
        available[pick] = False
        newly = [d for d in owners[pick] if d not in state.covered]
        if not newly:
            continue
        state = state.cover(newly)
        stale = {j for d in newly for j in holders[d] if available[j]}
        for j in stale:
            bonus[j] = _bonus(owners[j], state.covered, weights)
    return RerankedList(
        ranking.user, tuple(ranking.items[j] for j in selected), state.covered
    )


def rerank_all(
    lists: Mapping[str, ScoredList],
    params: RerankParams,
    tolerances: Mapping[str, float],
    catalog: ProviderCatalog,
) -> dict[str, RerankedList]:
    """Re-rank each user's list; FAR ignores `tolerances`."""
    reranked = {}
    for user, ranking in lists.items():
        tau = 1.0 if params.mode == "FAR" else tolerances[user]
        reranked[user] = rerank(ranking, params, tau, catalog)
    return reranked


def check_catalog_coverage(
    lists: Mapping[str, ScoredList], catalog: ProviderCatalog
) -> None:
    """Raise UnownedItemError if any listed item has no provider."""
    unowned = sorted(
        {
            item
            for ranking in lists.values()
            for item in ranking.items
            if item not in catalog.ownership
        }
    )
    if unowned:
        raise UnownedItemError(
            f"{len(unowned)} ranked items have no provider, e.g. {unowned[0]!r}"
        )


def load_provider_weights(
    path: Path,
    catalog: ProviderCatalog,
    delimiter: str = config.PROVIDER_MAP_DELIMITER,
) -> dict[str, float]:
    """Read (provider, weight) rows and normalize them to sum to 1.

    Providers absent from the file get weight 0.
    """
    raw = dict.fromkeys(catalog.providers, 0.0)
    for line_no, line in data_lines(path):
        fields = [field.strip() for field in line.split(delimiter)]
        if len(fields) < 2:
            raise DataFormatError(f"{path}:{line_no}: expected provider, weight")
        provider = fields[0]
        if provider not in raw:
            raise DataFormatError(f"{path}:{line_no}: unknown provider {provider!r}")
        try:
            weight = float(fields[1])
        except ValueError:
            raise DataFormatError(
                f"{path}:{line_no}: weight {fields[1]!r} is not a number"
            ) from None
        if not np.isfinite(weight) or weight < 0:
            raise DataFormatError(f"{path}:{line_no}: weight is {weight}")
        raw[provider] = weight
    total = sum(raw.values())
    if total <= 0:
        raise DataFormatError(f"{path}: provider weights sum to {total}")
    log.info(f"{path}: weights for {sum(w > 0 for w in raw.values())} providers")
    return {provider: weight / total for provider, weight in raw.items()}
