"""Base rankings: top-z lists from a model, ranking files, and normalization."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
import math
from collections.abc import Collection, Iterable, Mapping
from pathlib import Path

import numpy as np

import config
from errors import ColdUserError, DataFormatError, UnknownUserError
from types_faircover import RatingsDataset, ScoredItem, ScoredList, make_scored_list
from utils.text import data_lines

from .knn import NeighborhoodModel, neighborhood_scores
from .wrmf import FactorModel, factor_scores

Model = NeighborhoodModel | FactorModel


def predict_scores(model: Model, user_idx: int) -> np.ndarray:
    """Dispatch to the model's scoring function."""
    if isinstance(model, NeighborhoodModel):
        return neighborhood_scores(model, user_idx)
    return factor_scores(model, user_idx)


def _user_index(
    model: Model, train: RatingsDataset, user: str, known_users: Collection[str]
) -> int:
    try:
        return model.ratings.user_index[user]
    except KeyError:
        pass
    if user in known_users:
        raise ColdUserError(f"user {user!r} has no training ratings")
    raise UnknownUserError(f"unknown user {user!r} ({train.m} training users)")


def recommend(
    model: Model,
    train: RatingsDataset,
    user: str,
    z: int = config.LIST_LENGTH_Z,
    known_users: Collection[str] = (),
) -> ScoredList:
    """Return the user's top-z unrated training items, best first.

    Equal scores keep training-item order. `known_users` lets a missing user
    be reported as cold rather than unknown.
    """
    if z < 1:
        raise ValueError(f"z must be positive, got {z}")
    user_idx = _user_index(model, train, user, known_users)
    scores = predict_scores(model, user_idx)
    unrated = np.ones(len(scores), dtype=bool)
    unrated[model.ratings.rated[user_idx].indices] = False
    candidates = np.flatnonzero(unrated)
    ranked = candidates[np.argsort(-scores[candidates], kind="stable")][:z]
    return ScoredList(
        user, tuple(ScoredItem(train.items[j], float(scores[j])) for j in ranked)
    )


def recommend_all(
    model: Model,
    train: RatingsDataset,
    users: Iterable[str],
    z: int = config.LIST_LENGTH_Z,
) -> tuple[dict[str, ScoredList], list[str]]:
    """Recommend for each user; users without training ratings are returned as cold."""
    lists, cold = {}, []
    for user in users:
        if user in model.ratings.user_index:
            lists[user] = recommend(model, train, user, z)
        else:
            cold.append(user)
    if cold:
        log.warning(f"{len(cold)} users have no training ratings; skipped")
    return lists, cold


def truncate(ranking: ScoredList, z: int) -> ScoredList:
    return ScoredList(ranking.user, ranking.entries[:z])


def normalize_scores(ranking: ScoredList) -> ScoredList:
    """Min-max rescale scores to [0, 1]; a constant list maps to all 1.

    >>> normalize_scores(make_scored_list("u", [("a", 2), ("b", 1), ("c", 0)])).scores
    (1.0, 0.5, 0.0)
    >>> normalize_scores(make_scored_list("u", [("a", 7), ("b", 7)])).scores
    (1.0, 1.0)
    """
    if not ranking.entries:
        raise ValueError(f"cannot normalize the empty ranking of {ranking.user!r}")
    low, high = min(ranking.scores), max(ranking.scores)
    if high == low:
        return ScoredList(
            ranking.user, tuple(ScoredItem(e.item, 1.0) for e in ranking.entries)
        )
    span = high - low
    return ScoredList(
        ranking.user,
        tuple(ScoredItem(e.item, (e.score - low) / span) for e in ranking.entries),
    )


def import_rankings(
    path: Path, delimiter: str = config.RANKINGS_DELIMITER
) -> dict[str, ScoredList]:
    """Read (user, item, score) rows into per-user lists sorted by score."""
    rows: dict[str, list[tuple[str, float]]] = {}
    seen: set[tuple[str, str]] = set()
    for line_no, line in data_lines(path):
        fields = [field.strip() for field in line.split(delimiter)]
        if len(fields) < 3:
            raise DataFormatError(f"{path}:{line_no}: expected user, item, score")
        user, item = fields[0], fields[1]
        try:
            score = float(fields[2])
        except ValueError:
            raise DataFormatError(
                f"{path}:{line_no}: score {fields[2]!r} is not a number"
            ) from None
        if not math.isfinite(score):
            raise DataFormatError(f"{path}:{line_no}: score is {score}")
        if (user, item) in seen:
            raise DataFormatError(f"{path}:{line_no}: duplicate ({user}, {item})")
        seen.add((user, item))
        rows.setdefault(user, []).append((item, score))
    log.info(f"{path}: rankings for {len(rows)} users")
    return {user: make_scored_list(user, pairs) for user, pairs in rows.items()}


def export_rankings(
    rankings: Mapping[str, ScoredList],
    path: Path,
    delimiter: str = config.RANKINGS_DELIMITER,
) -> None:
    """Write rankings with enough digits for an exact round trip."""
    lines = [
        delimiter.join((user, e.item, format(e.score, f".{config.SCORE_DIGITS}g")))
        for user, ranking in rankings.items()
        for e in ranking.entries
    ]
    Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
