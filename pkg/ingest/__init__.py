# flake8: noqa

from .folds import split_folds
from .kcore import k_core_filter
from .providers import (
    assign_synthetic_providers,
    load_provider_map,
    restrict_catalog,
    save_provider_map,
)
from .ratings import (
    RatingsSchema,
    describe_dataset,
    load_ratings,
    ratings_matrix,
    save_ratings,
)
from .transactions import build_pseudo_items, load_transactions
