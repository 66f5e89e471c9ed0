#!/usr/bin/env python3
"""Sets default configuration values."""

import math
from pathlib import Path

VERSION = "0.1.0"
LOG_FILE = Path("faircover.log")

# Input formats
RATINGS_DELIMITER = "\t"
PROVIDER_MAP_DELIMITER = "\t"
RANKINGS_DELIMITER = "\t"
TRANSACTIONS_DELIMITER = ","
COMMENT_PREFIX = "#"
DELIMITER_NAMES = {"tab": "\t", "comma": ",", "space": " ", "semicolon": ";"}
SCORE_DIGITS = 17  # significant digits for an exact float round trip

# Synthetic providers
SYNTHETIC_PROVIDERS = 10
GEOMETRIC_P = 0.3
PROVIDER_PREFIX = "provider"

# Pseudo-items
AMOUNT_BINS = 5
CORE_K = 10
PSEUDO_ITEM_SEPARATOR = "|"

# Base recommenders
NEIGHBORHOOD = 50
WRMF_FACTORS = 10
WRMF_REG = 0.01
WRMF_ALPHA = 40.0
WRMF_ITERS = 15
WRMF_INIT_SCALE = 0.01
RECOMMENDER_KINDS = ("item_knn", "user_knn", "wrmf", "import")

# Re-ranking
LIST_LENGTH_Z = 100
RERANK_K = 10
RERANK_MODES = ("FAR", "PFAR")
WEIGHT_TOLERANCE = 1e-9

# Evaluation
LAMBDA_START = 0.0
LAMBDA_STOP = 2.0
LAMBDA_STEP = 0.05
LAMBDA_DECIMALS = 10
NDCG_BUDGET = 0.05
RELEVANCE_THRESHOLD = 0.0

# Experiment
FOLDS = 5
WORKERS = 1
OUTPUT_FILES = {
    "report": "report.csv",
    "summary": "summary.csv",
    "tradeoff": "tradeoff.csv",
    "manifest": "manifest.txt",
}


def max_tolerance(c: int) -> float:
    """Return the largest entropy tolerance over `c` providers, in bits.

    >>> max_tolerance(8)
    3.0
    """
    return math.log2(c)
