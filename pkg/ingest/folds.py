"""Cross-validation folds over ratings."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import numpy as np

from types_faircover import FoldSplit, RatingsDataset, make_dataset


def split_folds(
    dataset: RatingsDataset, folds: int, seed: int | np.random.SeedSequence
) -> list[FoldSplit]:
    """Partition ratings at random into `folds` parts whose sizes differ by ≤ 1.

    Fold i tests on part i and trains on the rest. Both sides list only the
    users and items their ratings reference, in the dataset's order.

    >>> ds = make_dataset([(f"u{i}", "i1", 1) for i in range(10)])
    >>> [len(f.test.ratings) for f in split_folds(ds, 5, seed=7)]
    [2, 2, 2, 2, 2]
    """
    if folds < 2:
        raise ValueError(f"folds must be at least 2, got {folds}")
    if len(dataset.ratings) < folds:
        raise ValueError(f"{len(dataset.ratings)} ratings cannot fill {folds} folds")
    rng = np.random.default_rng(seed)
    parts = np.array_split(rng.permutation(len(dataset.ratings)), folds)
    splits = []
    for fold_id, part in enumerate(parts):
        in_test = np.zeros(len(dataset.ratings), dtype=bool)
        in_test[part] = True
        test = [r for r, hit in zip(dataset.ratings, in_test, strict=True) if hit]
        train = [r for r, hit in zip(dataset.ratings, in_test, strict=True) if not hit]
        splits.append(
            FoldSplit(fold_id, _restrict(dataset, train), _restrict(dataset, test))
        )
    return splits


def _restrict(dataset: RatingsDataset, ratings: list) -> RatingsDataset:
    users = {r.user for r in ratings}
    items = {r.item for r in ratings}
    return make_dataset(
        ratings,
        [user for user in dataset.users if user in users],
        [item for item in dataset.items if item in items],
    )
