# flake8: noqa

from .knn import NeighborhoodModel, train_item_knn, train_user_knn
from .rankings import (
    export_rankings,
    import_rankings,
    normalize_scores,
    recommend,
    recommend_all,
    truncate,
)
from .wrmf import FactorModel, train_wrmf
