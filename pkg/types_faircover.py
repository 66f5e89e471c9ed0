"""Types for faircover.

Datasets, provider catalogs, rankings, re-ranking parameters and sweep
reports. All are NamedTuples and are never mutated after construction.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import math
from collections.abc import Iterable, Mapping
from typing import Literal, NamedTuple

import config
from errors import UnownedItemError

Mode = Literal["FAR", "PFAR"]

#################################################################
# Ratings
#################################################################


class Rating(NamedTuple):
    """One r(u,v) entry."""

    user: str
    item: str
    value: float


class RatingsDataset(NamedTuple):
    """Sparse ratings; `users` and `items` order is the dense index order."""

    users: tuple[str, ...]
    items: tuple[str, ...]
    ratings: tuple[Rating, ...]

    @property
    def m(self) -> int:
        return len(self.users)

    @property
    def n(self) -> int:
        return len(self.items)


def make_dataset(
    ratings: Iterable[tuple[str, str, float]],
    users: Iterable[str] | None = None,
    items: Iterable[str] | None = None,
) -> RatingsDataset:
    """Validate triples and build a dataset.

    Users and items default to those referenced by `ratings`, in order of
    first appearance.

    >>> ds = make_dataset([("u1", "i1", 4), ("u1", "i2", 3), ("u2", "i1", 5)])
    >>> ds.m, ds.n, len(ds.ratings)
    (2, 2, 3)
    """
    triples = tuple(Rating(str(u), str(v), float(r)) for u, v, r in ratings)
    if users is None:
        users = dict.fromkeys(t.user for t in triples)
    if items is None:
        items = dict.fromkeys(t.item for t in triples)
    users_t, items_t = tuple(users), tuple(items)
    user_set, item_set = set(users_t), set(items_t)
    if len(user_set) != len(users_t) or len(item_set) != len(items_t):
        raise ValueError("users and items must be unique")

    seen: set[tuple[str, str]] = set()
    for t in triples:
        if (t.user, t.item) in seen:
            raise ValueError(f"duplicate rating for ({t.user}, {t.item})")
        seen.add((t.user, t.item))
        if not math.isfinite(t.value) or t.value < 0:
            raise ValueError(f"rating for ({t.user}, {t.item}) is {t.value}")
        if t.user not in user_set or t.item not in item_set:
            raise ValueError(f"rating ({t.user}, {t.item}) references unknown ids")
    return RatingsDataset(users_t, items_t, triples)


class FoldSplit(NamedTuple):
    """One cross-validation fold."""

    fold_id: int
    train: RatingsDataset
    test: RatingsDataset


class TransactionRecord(NamedTuple):
    """One raw transaction such as a single loan funding."""

    user: str
    attributes: Mapping[str, str | float]
    provider_attribute: str


#################################################################
# Providers
#################################################################


class ProviderCatalog(NamedTuple):
    """Ownership of items by providers; `owns` is the binary P(v|d)."""

    providers: tuple[str, ...]
    ownership: Mapping[str, tuple[str, ...]]

    @property
    def c(self) -> int:
        return len(self.providers)

    def owners(self, item: str) -> tuple[str, ...]:
        """Return O_item in catalog provider order."""
        try:
            return self.ownership[item]
        except KeyError:
            raise UnownedItemError(f"unowned item {item!r}") from None

    def owns(self, item: str, provider: str) -> bool:
        return provider in self.ownership.get(item, ())


def make_catalog(
    pairs: Iterable[tuple[str, str]], providers: Iterable[str] | None = None
) -> ProviderCatalog:
    """Build a catalog from (item, provider) pairs.

    Providers default to those listed, in first-appearance order; repeated
    pairs are ignored.

    >>> cat = make_catalog([("i1", "d1"), ("i1", "d2"), ("i2", "d2")])
    >>> cat.c, cat.owners("i1"), cat.owns("i2", "d1")
    (2, ('d1', 'd2'), False)
    """
    pairs = [(str(item), str(provider)) for item, provider in pairs]
    if providers is None:
        providers = dict.fromkeys(provider for _, provider in pairs)
    providers_t = tuple(providers)
    if not providers_t:
        raise ValueError("a catalog needs at least one provider")
    order = {provider: i for i, provider in enumerate(providers_t)}
    if len(order) != len(providers_t):
        raise ValueError("providers must be unique")

    owned: dict[str, set[str]] = {}
    for item, provider in pairs:
        if provider not in order:
            raise ValueError(f"item {item!r} names unknown provider {provider!r}")
        owned.setdefault(item, set()).add(provider)
    ownership = {
        item: tuple(sorted(owners, key=order.__getitem__))
        for item, owners in owned.items()
    }
    return ProviderCatalog(providers_t, ownership)


#################################################################
# Rankings
#################################################################


class ScoredItem(NamedTuple):
    item: str
    score: float


class ScoredList(NamedTuple):
    """A user's base ranking R, best first."""

    user: str
    entries: tuple[ScoredItem, ...]

    @property
    def items(self) -> tuple[str, ...]:
        return tuple(entry.item for entry in self.entries)

    @property
    def scores(self) -> tuple[float, ...]:
        return tuple(entry.score for entry in self.entries)


def make_scored_list(user: str, pairs: Iterable[tuple[str, float]]) -> ScoredList:
    """Sort (item, score) pairs by score, descending and stable.

    >>> make_scored_list("u1", [("a", 0.3), ("b", 0.9), ("c", 0.5)]).items
    ('b', 'c', 'a')
    """
    entries = [ScoredItem(str(item), float(score)) for item, score in pairs]
    if len({entry.item for entry in entries}) != len(entries):
        raise ValueError(f"duplicate items in ranking for {user!r}")
    entries.sort(key=lambda entry: -entry.score)
    return ScoredList(str(user), tuple(entries))


class RerankParams(NamedTuple):
    """λ, K, FAR/PFAR mode and the provider preference P(d|u)."""

    lam: float
    k: int
    mode: Mode
    provider_weights: Mapping[str, float]


def uniform_weights(catalog: ProviderCatalog) -> dict[str, float]:
    """Return P(d|u) = 1/c for every provider.

    >>> uniform_weights(make_catalog([("i1", "d1"), ("i2", "d2")]))
    {'d1': 0.5, 'd2': 0.5}
    """
    return {provider: 1 / catalog.c for provider in catalog.providers}


def make_rerank_params(
    lam: float,
    k: int,
    mode: str,
    catalog: ProviderCatalog,
    weights: Mapping[str, float] | None = None,
) -> RerankParams:
    """Validate re-ranking parameters; weights default to uniform."""
    if not math.isfinite(lam) or lam < 0:
        raise ValueError(f"lambda must be a non-negative real, got {lam}")
    if k < 1:
        raise ValueError(f"K must be positive, got {k}")
    if mode not in config.RERANK_MODES:
        raise ValueError(f"mode must be one of {config.RERANK_MODES}, got {mode!r}")
    if weights is None:
        weights = uniform_weights(catalog)
    if missing := set(catalog.providers) - set(weights):
        raise ValueError(f"weights missing for providers {sorted(missing)}")
    if any(w < 0 for w in weights.values()):
        raise ValueError("provider weights must be non-negative")
    if abs(sum(weights.values()) - 1) > config.WEIGHT_TOLERANCE:
        raise ValueError(f"provider weights sum to {sum(weights.values())}, not 1")
    return RerankParams(float(lam), int(k), mode, dict(weights))  # type: ignore[arg-type]


class ToleranceProfile(NamedTuple):
    """Interest I(d|u) and entropy tolerance τ_u of one user."""

    user: str
    interest: Mapping[str, float]
    tolerance: float


class RerankedList(NamedTuple):
    """The re-ranked list S of one user."""

    user: str
    items: tuple[str, ...]
    covered_providers: frozenset[str]


#################################################################
# Reports
#################################################################


class SweepRow(NamedTuple):
    lam: float
    mean_ndcg: float
    apcr: float
    provider_counts: Mapping[str, int]


class SweepReport(NamedTuple):
    """Metrics per λ for one experiment configuration."""

    dataset: str
    recommender: str
    mode: str
    folds: int
    rows: tuple[SweepRow, ...]
    relevance_threshold: float = config.RELEVANCE_THRESHOLD
    cold_users: int = 0
    unscored_users: int = 0

    @property
    def base_row(self) -> SweepRow:
        """The λ=0 row: the base recommender's own metrics."""
        for row in self.rows:
            if row.lam == 0:
                return row
        raise ValueError("report has no λ=0 row")
