"""Provider catalogs: map files and synthetic geometric assignment."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections.abc import Iterable
from pathlib import Path

import numpy as np

import config
from errors import DataFormatError
from types_faircover import ProviderCatalog, RatingsDataset, make_catalog
from utils.text import data_lines


def load_provider_map(
    path: Path, delimiter: str = config.PROVIDER_MAP_DELIMITER
) -> ProviderCatalog:
    """Read (item, provider) rows; an item may be listed under several providers."""
    pairs = []
    for line_no, line in data_lines(path):
        fields = [field.strip() for field in line.split(delimiter)]
        if len(fields) < 2 or not fields[0] or not fields[1]:
            raise DataFormatError(f"{path}:{line_no}: expected item and provider")
        pairs.append((fields[0], fields[1]))
    if not pairs:
        raise DataFormatError(f"{path}: no providers listed (c must be at least 1)")
    catalog = make_catalog(pairs)
    log.info(f"{path}: {len(catalog.ownership)} items over c={catalog.c} providers")
    return catalog


def save_provider_map(
    catalog: ProviderCatalog,
    path: Path,
    delimiter: str = config.PROVIDER_MAP_DELIMITER,
) -> None:
    """Write one row per (item, provider) pair, grouped by provider.

    Grouping keeps first appearance in catalog order. Providers that own
    nothing cannot be written, so a catalog round-trips only when every
    provider owns an item.
    """
    rows = [
        f"{item}{delimiter}{provider}\n"
        for provider in catalog.providers
        for item, owners in catalog.ownership.items()
        if provider in owners
    ]
    Path(path).write_text("".join(rows), encoding="utf-8")


def geometric_shares(c: int, p: float) -> np.ndarray:
    """Return the truncated geometric pmf p(1-p)^j over j in 0..c-1.

    >>> geometric_shares(2, 0.5).round(4).tolist()
    [0.6667, 0.3333]
    """
    if not 0 < p < 1:
        raise ValueError(f"geometric p must lie in (0, 1), got {p}")
    if c < 1:
        raise ValueError(f"c must be positive, got {c}")
    pmf = p * (1 - p) ** np.arange(c)
    return pmf / pmf.sum()


def assign_synthetic_providers(
    dataset: RatingsDataset,
    c: int = config.SYNTHETIC_PROVIDERS,
    p: float = config.GEOMETRIC_P,
    seed: int | np.random.SeedSequence = 0,
) -> ProviderCatalog:
    """Give every item one provider drawn from a truncated geometric distribution.

    Provider j is named `provider<j>`; all c providers are in the catalog
    even when one draws no items.
    """
    shares = geometric_shares(c, p)
    if not dataset.items:
        raise ValueError("cannot assign providers to an empty dataset")
    rng = np.random.default_rng(seed)
    draws = rng.choice(c, size=dataset.n, p=shares)
    providers = [f"{config.PROVIDER_PREFIX}{j}" for j in range(c)]
    catalog = make_catalog(
        ((item, providers[j]) for item, j in zip(dataset.items, draws, strict=True)),
        providers=providers,
    )
    log.info(f"assigned {dataset.n} items to c={c} providers (p={p})")
    log.debug(f"inventory = {np.bincount(draws, minlength=c).tolist()}")
    return catalog


def restrict_catalog(catalog: ProviderCatalog, items: Iterable[str]) -> ProviderCatalog:
    """Keep only `items` and the providers that still own one of them.

    >>> cat = make_catalog([("i1", "d1"), ("i2", "d2"), ("i3", "d1")])
    >>> small = restrict_catalog(cat, ["i3"])
    >>> small.providers, dict(small.ownership)
    (('d1',), {'i3': ('d1',)})
    """
    keep = set(items)
    pairs = [
        (item, provider)
        for item, owners in catalog.ownership.items()
        if item in keep
        for provider in owners
    ]
    if not pairs:
        raise ValueError("no provider owns any of the remaining items")
    owning = {provider for _, provider in pairs}
    providers = [d for d in catalog.providers if d in owning]
    return make_catalog(pairs, providers)
