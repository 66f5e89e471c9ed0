# flake8: noqa

from .metrics import (
    apcr,
    exposure_table,
    mean_ndcg,
    ndcg_at_k,
    provider_histogram,
    provider_inventory,
    relevant_items,
)
from .sweep import (
    apcr_at_ndcg_budget,
    dominance_fraction,
    lambda_grid,
    lambda_sweep,
    merge_fold_reports,
    sweep_point,
    sweep_report,
    tradeoff_curve,
)
