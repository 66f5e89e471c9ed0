"""Turn raw transactions into pseudo-items.

Fast-expiring items (loans, say) rarely share users, so transactions that
agree on a set of grouping attributes are folded into one pseudo-item. The
rating of a user for a pseudo-item is how many of their transactions fell
into it.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections import Counter
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

import config
from errors import DataFormatError
from types_faircover import (
    ProviderCatalog,
    RatingsDataset,
    TransactionRecord,
    make_catalog,
    make_dataset,
)


def load_transactions(
    path: Path,
    provider_attribute: str,
    user_attribute: str = "user",
    delimiter: str = config.TRANSACTIONS_DELIMITER,
) -> list[TransactionRecord]:
    """Read a transactions table whose header row names the attributes."""
    try:
        table = pd.read_csv(path, sep=delimiter, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"{path}: no header row") from None
    except UnicodeDecodeError as err:
        raise DataFormatError(
            f"{path}: not valid UTF-8 at byte {err.start} ({err.reason})"
        ) from None
    for column in (user_attribute, provider_attribute):
        if column not in table.columns:
            raise DataFormatError(f"{path}: missing column {column!r}")
    attributes = [column for column in table.columns if column != user_attribute]
    records = [
        TransactionRecord(row.pop(user_attribute), row, provider_attribute)
        for row in table.to_dict("records")
    ]
    log.info(f"{path}: {len(records)} transactions, attributes {attributes}")
    return records


def quantile_buckets(values: Sequence[float], bins: int) -> np.ndarray:
    """Return equal-count bucket indices; equal values share a bucket.

    A value's bucket follows from how many values lie strictly below it.

    >>> quantile_buckets([10, 400, 25, 25, 1000, 50], 3).tolist()
    [0, 2, 0, 0, 2, 1]
    >>> quantile_buckets([50] * 5, 5).tolist()
    [0, 0, 0, 0, 0]
    >>> quantile_buckets([5, 1, 3], 1).tolist()
    [0, 0, 0]
    """
    if bins < 1:
        raise ValueError(f"bins must be positive, got {bins}")
    if not len(values):
        return np.zeros(0, dtype=np.int64)
    below = pd.Series(values, dtype=np.float64).rank(method="min").to_numpy() - 1
    return (below.astype(np.int64) * bins) // len(values)


def build_pseudo_items(
    records: Sequence[TransactionRecord],
    grouping: Sequence[str],
    amount_attribute: str | None = None,
    bins: int = config.AMOUNT_BINS,
) -> tuple[RatingsDataset, ProviderCatalog]:
    """Group transactions into pseudo-items rated by transaction count.

    A pseudo-item is named by its grouping tuple, e.g.
    `gender=F|country=KE|sector=Retail`; its single provider is the value of
    the records' provider attribute, which must be one of `grouping`.
    """
    if not grouping:
        raise ValueError("grouping attribute list is empty")
    if not records:
        raise ValueError("no transactions to group")
    provider_attribute = records[0].provider_attribute
    if provider_attribute not in grouping:
        raise ValueError(f"provider attribute {provider_attribute!r} must be grouped on")
    schema = set(records[0].attributes)
    for record in records:
        if set(record.attributes) != schema:
            raise DataFormatError(f"transaction of {record.user!r} has another schema")
    if missing := [name for name in grouping if name not in schema]:
        raise ValueError(f"grouping attributes {missing} not in schema")

    buckets = None
    if amount_attribute is not None:
        if amount_attribute not in schema:
            raise ValueError(f"amount attribute {amount_attribute!r} not in schema")
        try:
            amounts = [float(record.attributes[amount_attribute]) for record in records]
        except (TypeError, ValueError):
            raise DataFormatError(f"{amount_attribute!r} has non-numeric values") from None
        if any(not np.isfinite(amount) or amount < 0 for amount in amounts):
            raise DataFormatError(f"{amount_attribute!r} must be non-negative")
        buckets = quantile_buckets(amounts, bins)

    counts: Counter[tuple[str, str]] = Counter()
    owner: dict[str, str] = {}
    for i, record in enumerate(records):
        parts = []
        for name in grouping:
            value = record.attributes[name]
            if name == amount_attribute and buckets is not None:
                value = f"b{buckets[i]}"
            parts.append(f"{name}={value}")
        pseudo_item = config.PSEUDO_ITEM_SEPARATOR.join(parts)
        counts[(record.user, pseudo_item)] += 1
        owner[pseudo_item] = str(record.attributes[provider_attribute])

    dataset = make_dataset((user, item, count) for (user, item), count in counts.items())
    catalog = make_catalog(owner.items())
    log.info(
        f"{len(records)} transactions -> {dataset.n} pseudo-items, "
        f"{dataset.m} users, {len(dataset.ratings)} ratings"
    )
    return dataset, catalog
