"""Weighted regularized matrix factorization for implicit feedback.

Every cell of the rating matrix gets a preference p = 1{r > 0} and a
confidence c = 1 + alpha·r, and the factors minimize

    Σ_{u,v} c_uv (p_uv - x_u·y_v)² + reg (Σ_u ||x_u||² + Σ_v ||y_v||²)

by alternating exact least squares: each half-sweep solves every row's
normal equations with a Cholesky factorization.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
import math
from typing import NamedTuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse import csr_matrix

import config
from errors import ModelDivergedError
from ingest.ratings import RatingsMatrix, ratings_matrix
from types_faircover import RatingsDataset


class FactorModel(NamedTuple):
    user_factors: np.ndarray
    item_factors: np.ndarray
    f: int
    reg: float
    alpha: float
    iters: int
    objective: tuple[float, ...]  # after each full sweep
    ratings: RatingsMatrix


def _solve_half(
    matrix: csr_matrix, other: np.ndarray, reg: float, alpha: float
) -> np.ndarray:
    """Solve for all rows of one side with `other` held fixed."""
    f = other.shape[1]
    gram = other.T @ other
    reg_eye = reg * np.eye(f)
    solved = np.zeros((matrix.shape[0], f))
    for row in range(matrix.shape[0]):
        start, end = matrix.indptr[row], matrix.indptr[row + 1]
        if start == end:
            continue  # b = 0, so x = 0
        cols = matrix.indices[start:end]
        values = matrix.data[start:end]
        confidence = 1.0 + alpha * values
        preference = (values > 0).astype(np.float64)
        other_rows = other[cols]
        a = gram + (other_rows.T * (confidence - 1.0)) @ other_rows + reg_eye
        b = other_rows.T @ (confidence * preference)
        solved[row] = cho_solve(cho_factor(a), b)
    return solved


def wrmf_objective(
    matrix: csr_matrix,
    user_factors: np.ndarray,
    item_factors: np.ndarray,
    reg: float,
    alpha: float,
) -> float:
    """Evaluate the regularized WRMF loss without densifying the matrix.

    Unobserved cells contribute (x·y)², summed over all cells as
    trace(XᵀX · YᵀY); observed cells replace that term with c(p - x·y)².
    """
    coo = matrix.tocoo()
    predicted = np.einsum("ij,ij->i", user_factors[coo.row], item_factors[coo.col])
    confidence = 1.0 + alpha * coo.data
    preference = (coo.data > 0).astype(np.float64)
    all_cells = float(
        np.sum((user_factors.T @ user_factors) * (item_factors.T @ item_factors))
    )
    observed = float(
        np.sum(confidence * (preference - predicted) ** 2 - predicted**2)
    )
    penalty = reg * float(np.sum(user_factors**2) + np.sum(item_factors**2))
    return all_cells + observed + penalty


def train_wrmf(
    train: RatingsDataset,
    f: int = config.WRMF_FACTORS,
    reg: float = config.WRMF_REG,
    alpha: float = config.WRMF_ALPHA,
    iters: int = config.WRMF_ITERS,
    seed: int | np.random.SeedSequence = 0,
) -> FactorModel:
    """Fit WRMF factors from seeded small uniform noise."""
    if f < 1 or iters < 1:
        raise ValueError(f"f and iters must be positive, got {f=} {iters=}")
    if reg <= 0 or alpha <= 0:
        raise ValueError(f"reg and alpha must be positive, got {reg=} {alpha=}")
    rm = ratings_matrix(train)
    by_item = rm.matrix.T.tocsr()
    rng = np.random.default_rng(seed)
    user_factors = rng.uniform(0, config.WRMF_INIT_SCALE, (train.m, f))
    item_factors = rng.uniform(0, config.WRMF_INIT_SCALE, (train.n, f))

    history = []
    for sweep in range(1, iters + 1):
        user_factors = _solve_half(rm.matrix, item_factors, reg, alpha)
        item_factors = _solve_half(by_item, user_factors, reg, alpha)
        objective = wrmf_objective(rm.matrix, user_factors, item_factors, reg, alpha)
        if not math.isfinite(objective):
            raise ModelDivergedError(
                f"WRMF objective is {objective} after sweep {sweep}; "
                f"check hyperparameters ({f=}, {reg=}, {alpha=})"
            )
        log.info(f"WRMF sweep {sweep}/{iters}: objective {objective:.6f}")
        history.append(objective)
    return FactorModel(
        user_factors, item_factors, f, reg, alpha, iters, tuple(history), rm
    )


def factor_scores(model: FactorModel, user_idx: int) -> np.ndarray:
    """Predict x_u·y_v for every training item v."""
    return model.item_factors @ model.user_factors[user_idx]
