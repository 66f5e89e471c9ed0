"""Load, save, and index ratings files.

A ratings file is delimiter-separated text with user, item and rating
columns; lines starting with `#` are comments.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix

import config
from errors import DataFormatError
from types_faircover import RatingsDataset, make_dataset
from utils.text import data_lines


class RatingsSchema(NamedTuple):
    """Column layout of a ratings file."""

    delimiter: str = config.RATINGS_DELIMITER
    user_col: int = 0
    item_col: int = 1
    rating_col: int = 2


class DatasetStats(NamedTuple):
    m: int
    n: int
    ratings: int
    density: float


class RatingsMatrix(NamedTuple):
    """A dataset as an m × n CSR matrix plus its id → index maps."""

    matrix: csr_matrix
    rated: csr_matrix
    user_index: dict[str, int]
    item_index: dict[str, int]


def load_ratings(
    path: Path,
    schema: RatingsSchema | None = None,
    clamp_negative: bool = False,
) -> RatingsDataset:
    """Read a ratings file; duplicate (user, item) rows keep the last value."""
    schema = schema or RatingsSchema()
    needed = max(schema.user_col, schema.item_col, schema.rating_col) + 1
    triples: dict[tuple[str, str], float] = {}
    duplicates = clamped = 0

    for line_no, line in data_lines(path):
        fields = line.split(schema.delimiter)
        if len(fields) < needed:
            raise DataFormatError(
                f"{path}:{line_no}: expected {needed} columns, got {len(fields)}"
            )
        user = fields[schema.user_col].strip()
        item = fields[schema.item_col].strip()
        try:
            value = float(fields[schema.rating_col])
        except ValueError:
            raise DataFormatError(
                f"{path}:{line_no}: rating {fields[schema.rating_col]!r} is not a number"
            ) from None
        if not user or not item or not math.isfinite(value):
            raise DataFormatError(f"{path}:{line_no}: malformed line {line!r}")
        if value < 0:
            if not clamp_negative:
                raise DataFormatError(
                    f"{path}:{line_no}: negative rating {value} "
                    "(set dataset.clamp_negative to clamp)"
                )
            value = 0.0
            clamped += 1
        if (user, item) in triples:
            duplicates += 1
        triples[(user, item)] = value

    if duplicates:
        log.warning(f"{path}: {duplicates} duplicate (user, item) rows; kept last")
    if clamped:
        log.warning(f"{path}: clamped {clamped} negative ratings to 0")
    dataset = make_dataset((u, v, r) for (u, v), r in triples.items())
    log.info(f"{path}: {describe_dataset(dataset)}")
    return dataset


def save_ratings(
    dataset: RatingsDataset, path: Path, delimiter: str = config.RATINGS_DELIMITER
) -> None:
    """Write ratings in load order so that `load_ratings` returns an equal value."""
    lines = [
        delimiter.join((r.user, r.item, format(r.value, f".{config.SCORE_DIGITS}g")))
        for r in dataset.ratings
    ]
    Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


def describe_dataset(dataset: RatingsDataset) -> DatasetStats:
    """Return m, n, number of ratings and density.

    >>> describe_dataset(make_dataset([("u1", "i1", 4), ("u1", "i2", 3), ("u2", "i1", 5)]))
    DatasetStats(m=2, n=2, ratings=3, density=0.75)
    """
    cells = dataset.m * dataset.n
    density = len(dataset.ratings) / cells if cells else 0.0
    return DatasetStats(dataset.m, dataset.n, len(dataset.ratings), density)


def ratings_matrix(dataset: RatingsDataset) -> RatingsMatrix:
    """Index a dataset as a CSR matrix of values and one of rated indicators.

    >>> rm = ratings_matrix(make_dataset([("u1", "i1", 4), ("u2", "i2", 0)]))
    >>> rm.matrix.toarray().tolist(), rm.rated.toarray().tolist()
    ([[4.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
    """
    user_index = {user: i for i, user in enumerate(dataset.users)}
    item_index = {item: j for j, item in enumerate(dataset.items)}
    rows = np.fromiter((user_index[r.user] for r in dataset.ratings), dtype=np.int64)
    cols = np.fromiter((item_index[r.item] for r in dataset.ratings), dtype=np.int64)
    values = np.fromiter((r.value for r in dataset.ratings), dtype=np.float64)
    matrix = csr_matrix((values, (rows, cols)), shape=(dataset.m, dataset.n))
    rated = csr_matrix((np.ones_like(values), (rows, cols)), shape=matrix.shape)
    matrix.sort_indices()
    rated.sort_indices()
    return RatingsMatrix(matrix, rated, user_index, item_index)
