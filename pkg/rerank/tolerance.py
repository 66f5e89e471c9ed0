"""Provider interest profiles and entropy-based diversity tolerance.

A user's interest in provider d is the share of their rating mass that falls
on d's items; the tolerance τ_u is the entropy (bits) of that distribution.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections import defaultdict
from collections.abc import Iterable, Mapping

import numpy as np
from scipy.stats import entropy

import config
from errors import UnknownUserError
from types_faircover import ProviderCatalog, Rating, RatingsDataset, ToleranceProfile


def _interest(ratings: Iterable[Rating], catalog: ProviderCatalog) -> dict[str, float]:
    mass: dict[str, float] = defaultdict(float)
    for rating in ratings:
        for provider in catalog.owners(rating.item):
            mass[provider] += rating.value
    total = sum(mass.values())
    if total <= 0:
        return {}
    return {
        provider: mass[provider] / total
        for provider in catalog.providers
        if mass.get(provider, 0) > 0
    }


def compute_interest(
    train: RatingsDataset, catalog: ProviderCatalog, user: str
) -> dict[str, float]:
    """Return I(d|u) over providers with positive mass; {} when the mass is zero.

    An item owned by several providers counts once for each of them.

    >>> from types_faircover import make_catalog, make_dataset
    >>> ds = make_dataset([("u", "v1", 2), ("u", "v2", 2)])
    >>> cat = make_catalog([("v1", "d1"), ("v1", "d2"), ("v2", "d1")])
    >>> {d: round(i, 4) for d, i in compute_interest(ds, cat, "u").items()}
    {'d1': 0.6667, 'd2': 0.3333}
    """
    if user not in train.users:
        raise UnknownUserError(f"unknown user {user!r}")
    return _interest((r for r in train.ratings if r.user == user), catalog)


def compute_interests(
    train: RatingsDataset, catalog: ProviderCatalog
) -> dict[str, dict[str, float]]:
    """compute_interest for every training user, in one pass over the ratings."""
    by_user: dict[str, list[Rating]] = {user: [] for user in train.users}
    for rating in train.ratings:
        by_user[rating.user].append(rating)
    return {user: _interest(ratings, catalog) for user, ratings in by_user.items()}


def compute_tolerance(
    interest: Mapping[str, float],
    c: int,
    fallback: float | None = None,
    normalize: bool = False,
) -> float:
    """Return τ_u = -Σ I log₂ I, bounded by log₂ c.

    An empty interest map is the cold case and returns `fallback`, by default
    the maximum log₂ c. With `normalize`, τ is divided by log₂ c (when c > 1).

    >>> compute_tolerance({"d": 1.0}, 3)
    0.0
    >>> round(compute_tolerance({"d1": 0.5, "d2": 0.25, "d3": 0.25}, 3), 12)
    1.5
    >>> compute_tolerance({}, 4)
    2.0
    """
    if c < 1:
        raise ValueError(f"c must be positive, got {c}")
    values = np.fromiter(interest.values(), dtype=np.float64, count=len(interest))
    if np.any(values < 0):
        raise ValueError(f"interest values must be non-negative, got {dict(interest)}")
    ceiling = config.max_tolerance(c)
    if not values.size or values.sum() == 0:
        tau = ceiling if fallback is None else fallback
    else:
        tau = min(max(0.0, float(entropy(values, base=2))), ceiling)
    if normalize and c > 1:
        tau /= ceiling
    return tau


def tolerance_profiles(
    train: RatingsDataset,
    catalog: ProviderCatalog,
    fallback: float | None = None,
    normalize: bool = False,
) -> dict[str, ToleranceProfile]:
    """Interest and tolerance of every training user."""
    profiles = {}
    cold = 0
    for user, interest in compute_interests(train, catalog).items():
        cold += not interest
        tau = compute_tolerance(interest, catalog.c, fallback, normalize)
        profiles[user] = ToleranceProfile(user, interest, tau)
    if cold:
        log.warning(f"{cold} users have no rating mass; tolerance set to fallback")
    log.debug(f"tolerance for {len(profiles)} users, {normalize=}")
    return profiles
