"""k-core pruning of the bipartite user/item rating graph."""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log

import networkx as nx

from types_faircover import RatingsDataset, make_dataset


def rating_graph(dataset: RatingsDataset) -> nx.Graph:
    """Return the bipartite graph with nodes ("u", user) and ("i", item)."""
    graph = nx.Graph()
    graph.add_nodes_from(("u", user) for user in dataset.users)
    graph.add_nodes_from(("i", item) for item in dataset.items)
    graph.add_edges_from((("u", r.user), ("i", r.item)) for r in dataset.ratings)
    return graph


def k_core_filter(dataset: RatingsDataset, k: int) -> RatingsDataset:
    """Keep the largest sub-dataset where every user and item has ≥ k ratings.

    The k-core is the fixed point of repeatedly dropping users and items
    below degree k, so the result does not depend on pruning order.

    >>> star = make_dataset([("u1", f"i{j}", 1) for j in range(10)])
    >>> len(k_core_filter(star, 2).ratings)
    0
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    core = nx.k_core(rating_graph(dataset), k)
    users = [user for user in dataset.users if ("u", user) in core]
    items = [item for item in dataset.items if ("i", item) in core]
    kept_users, kept_items = set(users), set(items)
    ratings = [
        r for r in dataset.ratings if r.user in kept_users and r.item in kept_items
    ]
    log.info(
        f"{k}-core: {dataset.m}->{len(users)} users, {dataset.n}->{len(items)} items, "
        f"{len(dataset.ratings)}->{len(ratings)} ratings"
    )
    return make_dataset(ratings, users, items)
