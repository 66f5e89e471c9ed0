"""Item- and user-based nearest-neighbor recommenders.

Similarity is plain cosine on raw rating vectors. A prediction is the
similarity-weighted mean rating over the neighbors the user (item-based) or
the item (user-based) shares:

    P(v|u) = Σ_j sim(v,j)·r(u,j) / Σ_j sim(v,j)

and 0 when no neighbor applies.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from typing import Literal, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from sklearn.metrics.pairwise import cosine_similarity

from ingest.ratings import RatingsMatrix, ratings_matrix
from types_faircover import RatingsDataset


class NeighborhoodModel(NamedTuple):
    """Cosine similarities and their top-N pruning.

    `neighbors` is `similarity` with the diagonal removed and each row cut
    to its `neighborhood` largest positive entries.
    """

    kind: Literal["item", "user"]
    similarity: csr_matrix
    neighbors: csr_matrix
    neighborhood: int
    ratings: RatingsMatrix


def cosine(vectors: csr_matrix) -> csr_matrix:
    """Return row-by-row cosine similarity, clipped to [-1, 1].

    >>> cosine(csr_matrix([[1.0, 2.0, 0.0], [2.0, 4.0, 1.0]])).toarray().round(3).tolist()
    [[1.0, 0.976], [0.976, 1.0]]
    """
    similarity = csr_matrix(cosine_similarity(vectors, dense_output=False))
    np.clip(similarity.data, -1.0, 1.0, out=similarity.data)
    similarity.sort_indices()
    return similarity


def top_neighbors(similarity: csr_matrix, size: int) -> csr_matrix:
    """Keep each row's `size` most similar other entities with positive similarity.

    Equal similarities keep the lower index.
    """
    rows, cols, values = [], [], []
    for a in range(similarity.shape[0]):
        start, end = similarity.indptr[a], similarity.indptr[a + 1]
        idx = similarity.indices[start:end]
        val = similarity.data[start:end]
        keep = (idx != a) & (val > 0)
        idx, val = idx[keep], val[keep]
        if len(idx) > size:
            order = np.lexsort((idx, -val))[:size]
            idx, val = idx[order], val[order]
        rows.append(np.full(len(idx), a))
        cols.append(idx)
        values.append(val)
    pruned = csr_matrix(
        (
            np.concatenate(values) if values else np.empty(0),
            (
                np.concatenate(rows) if rows else np.empty(0, dtype=np.int64),
                np.concatenate(cols) if cols else np.empty(0, dtype=np.int64),
            ),
        ),
        shape=similarity.shape,
    )
    pruned.sort_indices()
    return pruned


def _train(
    train: RatingsDataset, neighborhood: int, kind: Literal["item", "user"]
) -> NeighborhoodModel:
    if neighborhood < 1:
        raise ValueError(f"neighborhood must be positive, got {neighborhood}")
    if not train.ratings:
        raise ValueError("cannot train on an empty dataset")
    rm = ratings_matrix(train)
    vectors = rm.matrix.T.tocsr() if kind == "item" else rm.matrix
    similarity = cosine(vectors)
    neighbors = top_neighbors(similarity, neighborhood)
    log.info(
        f"{kind}KNN: {similarity.shape[0]} {kind}s, N={neighborhood}, "
        f"{neighbors.nnz} neighbor links"
    )
    return NeighborhoodModel(kind, similarity, neighbors, neighborhood, rm)


def train_item_knn(train: RatingsDataset, neighborhood: int) -> NeighborhoodModel:
    """Fit itemKNN: cosine similarity over item rating columns."""
    return _train(train, neighborhood, "item")


def train_user_knn(train: RatingsDataset, neighborhood: int) -> NeighborhoodModel:
    """Fit userKNN: cosine similarity over user rating rows."""
    return _train(train, neighborhood, "user")


def neighborhood_scores(model: NeighborhoodModel, user_idx: int) -> np.ndarray:
    """Predict P(v|u) for every training item v of one user."""
    matrix, rated = model.ratings.matrix, model.ratings.rated
    if model.kind == "item":
        numerator = model.neighbors @ matrix[user_idx].T
        denominator = model.neighbors @ rated[user_idx].T
    else:
        weights = model.neighbors[user_idx]
        numerator = (weights @ matrix).T
        denominator = (weights @ rated).T
    numerator = np.asarray(numerator.todense()).ravel()
    denominator = np.asarray(denominator.todense()).ravel()
    scores = np.zeros_like(numerator)
    np.divide(numerator, denominator, out=scores, where=denominator > 0)
    return scores
