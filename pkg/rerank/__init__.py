# flake8: noqa

from .far import (
    CoverageState,
    check_catalog_coverage,
    fairness_bonus,
    load_provider_weights,
    rerank,
    rerank_all,
)
from .tolerance import (
    compute_interest,
    compute_interests,
    compute_tolerance,
    tolerance_profiles,
)
