"""Emit the run manifest: everything needed to reproduce an output directory.

The manifest carries no timestamps or host details, so two runs of the same
config write identical bytes.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"

import logging as log
from collections.abc import Mapping, Sequence
from pathlib import Path

from ingest.ratings import DatasetStats
from types_faircover import SweepReport
from utils.text import tabulate_pairs


def emit_manifest(
    path: Path,
    version: str,
    settings: Mapping[str, object],
    stats: DatasetStats,
    report: SweepReport,
    outputs: Sequence[str],
) -> None:
    """Write config echo, version, dataset statistics and run tallies."""
    sections = {
        "faircover": {"version": version},
        "config": dict(sorted(settings.items())),
        "dataset": {
            "users": stats.m,
            "items": stats.n,
            "ratings": stats.ratings,
            "density": f"{stats.density:.6g}",
        },
        "run": {
            "mode": report.mode,
            "recommender": report.recommender,
            "folds": report.folds,
            "relevance_threshold": f"{report.relevance_threshold:g}",
            "cold_users": report.cold_users,
            "unscored_users": report.unscored_users,
            "lambdas": len(report.rows),
        },
        "outputs": {f"file{i}": name for i, name in enumerate(outputs, start=1)},
    }
    text = "\n\n".join(
        f"[{name}]\n{tabulate_pairs(pairs)}" for name, pairs in sections.items()
    )
    Path(path).write_text(text + "\n", encoding="utf-8")
    log.info(f"wrote {path}")
