"""Run one fairness re-ranking experiment from a declarative config.

A config is a flat `key = value` file with dotted keys, e.g.

    dataset.ratings = filmtrust.tsv
    providers.synthetic.c = 10
    recommender.kind = wrmf
    rerank.mode = FAR
    experiment.seed = 42
    output.dir = out/filmtrust-wrmf-far

The pipeline is ingest, folds, base recommender (or imported rankings),
score normalization, tolerance, λ sweep and reports. Every fold is
independent: folds are prepared on a thread pool, then every (fold, λ)
pair is evaluated on the same pool, and results are merged in fold order.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"
__version__ = "0.1.0"

import logging as log
import shutil
import tempfile
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from pathlib import Path
from typing import NamedTuple

import numpy as np
from dotenv import dotenv_values

import config
from errors import ConfigError, ExperimentError, FaircoverError
from evaluate.metrics import exposure_table, provider_inventory, relevant_items
from evaluate.sweep import (
    SweepPoint,
    apcr_at_ndcg_budget,
    check_grid,
    lambda_grid,
    merge_fold_reports,
    sweep_point,
    sweep_report,
    tradeoff_curve,
)
from formats.emit.manifest import emit_manifest
from formats.emit.report import (
    emit_histogram,
    emit_report,
    emit_summary,
    emit_tradeoff,
    histogram_name,
)
from ingest.folds import split_folds
from ingest.providers import assign_synthetic_providers, load_provider_map
from ingest.ratings import RatingsSchema, describe_dataset, load_ratings
from recommenders.knn import train_item_knn, train_user_knn
from recommenders.rankings import (
    export_rankings,
    import_rankings,
    normalize_scores,
    recommend_all,
    truncate,
)
from recommenders.wrmf import train_wrmf
from rerank.far import check_catalog_coverage, load_provider_weights
from rerank.tolerance import compute_tolerance, tolerance_profiles
from types_faircover import (
    FoldSplit,
    ProviderCatalog,
    RatingsDataset,
    RerankParams,
    ScoredList,
    SweepReport,
    make_rerank_params,
)
from utils.text import parse_bool, split_list


class ExperimentConfig(NamedTuple):
    """Typed experiment settings; `problems` holds parse-time violations."""

    ratings: Path | None = None
    dataset_name: str = ""
    delimiter: str = config.RATINGS_DELIMITER
    clamp_negative: bool = False
    provider_map: Path | None = None
    synthetic_c: int | None = None
    synthetic_p: float = config.GEOMETRIC_P
    provider_weights: Path | None = None
    recommender: str = "wrmf"
    neighborhood: int = config.NEIGHBORHOOD
    factors: int = config.WRMF_FACTORS
    reg: float = config.WRMF_REG
    alpha: float = config.WRMF_ALPHA
    iters: int = config.WRMF_ITERS
    import_pattern: str | None = None
    z: int = config.LIST_LENGTH_Z
    k: int = config.RERANK_K
    mode: str = "FAR"
    grid: tuple[float, ...] = tuple(lambda_grid())
    budget: float = config.NDCG_BUDGET
    relevance_threshold: float = config.RELEVANCE_THRESHOLD
    normalize_tolerance: bool = False
    cold_fallback: float | None = None
    folds: int = config.FOLDS
    seed: int | None = None
    workers: int = config.WORKERS
    export_rankings: bool = False
    output_dir: Path | None = None
    problems: tuple[str, ...] = ()


#################################################################
# Parsing and validation
#################################################################


def _delimiter(text: str) -> str:
    delimiter = config.DELIMITER_NAMES.get(text.lower(), text)
    if len(delimiter) != 1:
        raise ValueError(f"{text!r} is not a single-character delimiter")
    return delimiter


def _mode(text: str) -> str:
    return text.upper()


KEYS: dict[str, tuple[str, Callable[[str], object]]] = {
    "dataset.name": ("dataset_name", str),
    "dataset.ratings": ("ratings", Path),
    "dataset.delimiter": ("delimiter", _delimiter),
    "dataset.clamp_negative": ("clamp_negative", parse_bool),
    "providers.map": ("provider_map", Path),
    "providers.synthetic.c": ("synthetic_c", int),
    "providers.synthetic.p": ("synthetic_p", float),
    "providers.weights": ("provider_weights", Path),
    "recommender.kind": ("recommender", str),
    "recommender.neighborhood": ("neighborhood", int),
    "recommender.factors": ("factors", int),
    "recommender.reg": ("reg", float),
    "recommender.alpha": ("alpha", float),
    "recommender.iters": ("iters", int),
    "recommender.import": ("import_pattern", str),
    "rerank.z": ("z", int),
    "rerank.k": ("k", int),
    "rerank.mode": ("mode", _mode),
    "eval.budget": ("budget", float),
    "eval.relevance_threshold": ("relevance_threshold", float),
    "tolerance.normalize": ("normalize_tolerance", parse_bool),
    "tolerance.cold_fallback": ("cold_fallback", float),
    "experiment.folds": ("folds", int),
    "experiment.seed": ("seed", int),
    "experiment.workers": ("workers", int),
    "experiment.export_rankings": ("export_rankings", parse_bool),
    "output.dir": ("output_dir", Path),
}
GRID_KEYS = ("lambda.start", "lambda.stop", "lambda.step")
VALUES_KEY = "lambda.values"


def _parse_grid(settings: Mapping[str, str | None], problems: list[str]) -> tuple:
    given = [key for key in GRID_KEYS if key in settings]
    try:
        if VALUES_KEY in settings:
            if given:
                problems.append(f"{VALUES_KEY}: conflicts with {', '.join(given)}")
            return tuple(float(v) for v in split_list(settings[VALUES_KEY] or ""))
        start, stop, step = (
            float(settings.get(key) or default)
            for key, default in zip(
                GRID_KEYS,
                (config.LAMBDA_START, config.LAMBDA_STOP, config.LAMBDA_STEP),
                strict=True,
            )
        )
        return tuple(lambda_grid(start, stop, step))
    except ValueError as err:
        problems.append(f"lambda: {err}")
        return ()


def parse_config(
    settings: Mapping[str, str | None], base_dir: Path = Path(".")
) -> ExperimentConfig:
    """Convert raw key/value settings; relative paths resolve against `base_dir`."""
    problems: list[str] = []
    values: dict[str, object] = {}
    for key, raw in settings.items():
        if key in GRID_KEYS or key == VALUES_KEY:
            continue
        if key not in KEYS:
            problems.append(f"{key}: unknown key")
            continue
        if raw is None or not raw.strip():
            problems.append(f"{key}: missing value")
            continue
        field, convert = KEYS[key]
        try:
            value = convert(raw.strip())
        except ValueError:
            problems.append(f"{key}: cannot parse {raw.strip()!r}")
            continue
        if isinstance(value, Path) and not value.is_absolute():
            value = base_dir / value
        values[field] = value
    pattern = values.get("import_pattern")
    if isinstance(pattern, str) and not Path(pattern).is_absolute():
        values["import_pattern"] = str(base_dir / pattern)
    grid = _parse_grid(settings, problems)
    return ExperimentConfig(**values, grid=grid, problems=tuple(problems))


def read_config(path: Path) -> ExperimentConfig:
    """Read a config file with python-dotenv and parse it."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"no such config file {path}")
    settings = dotenv_values(path, interpolate=False)
    log.info(f"{path}: {len(settings)} settings")
    return parse_config(settings, path.parent)


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Return violations, each naming its key; empty means the config can run."""
    violations = list(cfg.problems)

    def check(ok: bool, message: str) -> None:
        if not ok:
            violations.append(message)

    if cfg.ratings is None:
        violations.append("dataset.ratings: required")
    else:
        check(cfg.ratings.is_file(), f"dataset.ratings: no such file {cfg.ratings}")

    sources = (cfg.provider_map is not None) + (cfg.synthetic_c is not None)
    check(sources == 1, "providers: set exactly one of map or synthetic.c")
    if cfg.provider_map is not None:
        check(
            cfg.provider_map.is_file(),
            f"providers.map: no such file {cfg.provider_map}",
        )
    if cfg.synthetic_c is not None:
        check(cfg.synthetic_c >= 1, "providers.synthetic.c: must be at least 1")
    check(0 < cfg.synthetic_p < 1, "providers.synthetic.p: must lie in (0, 1)")
    if cfg.provider_weights is not None:
        check(
            cfg.provider_weights.is_file(),
            f"providers.weights: no such file {cfg.provider_weights}",
        )

    check(
        cfg.recommender in config.RECOMMENDER_KINDS,
        f"recommender.kind: {cfg.recommender!r} not in {config.RECOMMENDER_KINDS}",
    )
    if cfg.recommender == "import":
        check(bool(cfg.import_pattern), "recommender.import: required for import")
    check(cfg.neighborhood >= 1, "recommender.neighborhood: must be at least 1")
    check(cfg.factors >= 1, "recommender.factors: must be at least 1")
    check(cfg.reg > 0, "recommender.reg: must be positive")
    check(cfg.alpha > 0, "recommender.alpha: must be positive")
    check(cfg.iters >= 1, "recommender.iters: must be at least 1")

    check(cfg.z >= 1, "rerank.z: must be at least 1")
    check(cfg.k >= 1, "rerank.k: must be at least 1")
    check(cfg.k <= cfg.z, f"rerank.k: K={cfg.k} exceeds z={cfg.z}")
    check(
        cfg.mode in config.RERANK_MODES,
        f"rerank.mode: {cfg.mode!r} not in {config.RERANK_MODES}",
    )
    try:
        check_grid(cfg.grid)
    except ValueError as err:
        violations.append(f"lambda: {err}")
    check(0 <= cfg.budget < 1, "eval.budget: must lie in [0, 1)")
    check(cfg.relevance_threshold >= 0, "eval.relevance_threshold: must be >= 0")
    if cfg.cold_fallback is not None:
        check(cfg.cold_fallback >= 0, "tolerance.cold_fallback: must be >= 0")
    check(cfg.folds >= 2, "experiment.folds: must be at least 2")
    check(cfg.seed is not None, "experiment.seed: required")
    check(cfg.workers >= 1, "experiment.workers: must be at least 1")
    check(cfg.output_dir is not None, "output.dir: required")
    return violations


def config_echo(cfg: ExperimentConfig) -> dict[str, str]:
    """The effective settings under their config keys."""
    echo = {
        key: "" if getattr(cfg, field) is None else str(getattr(cfg, field))
        for key, (field, _) in KEYS.items()
    }
    echo["dataset.delimiter"] = repr(cfg.delimiter)
    echo[VALUES_KEY] = ", ".join(f"{lam:g}" for lam in cfg.grid)
    return echo


#################################################################
# Pipeline
#################################################################


class FoldInputs(NamedTuple):
    """Everything a fold's λ points need, computed once per fold."""

    fold_id: int
    base_lists: dict[str, ScoredList]
    tolerances: dict[str, float]
    relevant: dict[str, set[str]]
    cold_users: int


def train_base_lists(
    cfg: ExperimentConfig, split: FoldSplit, seed: np.random.SeedSequence
) -> tuple[dict[str, ScoredList], list[str]]:
    """Top-z lists for the fold's test users; also return users left without one."""
    train, test_users = split.train, split.test.users
    if cfg.recommender == "import":
        path = Path(str(cfg.import_pattern).format(fold=split.fold_id))
        imported = import_rankings(path)
        lists = {u: truncate(imported[u], cfg.z) for u in test_users if u in imported}
        cold = [u for u in test_users if u not in imported]
        return lists, cold

    if cfg.recommender == "item_knn":
        model = train_item_knn(train, cfg.neighborhood)
    elif cfg.recommender == "user_knn":
        model = train_user_knn(train, cfg.neighborhood)
    else:
        model = train_wrmf(train, cfg.factors, cfg.reg, cfg.alpha, cfg.iters, seed)
    lists, cold = recommend_all(model, train, test_users, cfg.z)
    return lists, cold


def user_tolerances(
    cfg: ExperimentConfig,
    train: RatingsDataset,
    catalog: ProviderCatalog,
    users: list[str],
) -> dict[str, float]:
    """τ_u from training ratings only; users absent from training get the fallback."""
    profiles = tolerance_profiles(
        train, catalog, cfg.cold_fallback, cfg.normalize_tolerance
    )
    fallback = compute_tolerance(
        {}, catalog.c, cfg.cold_fallback, cfg.normalize_tolerance
    )
    return {
        user: profiles[user].tolerance if user in profiles else fallback
        for user in users
    }


def prepare_fold(
    split: FoldSplit,
    seed: np.random.SeedSequence,
    cfg: ExperimentConfig,
    catalog: ProviderCatalog,
) -> FoldInputs:
    """Train (or import) base lists, normalize them and compute tolerances."""
    log.info(
        f"fold {split.fold_id}: {len(split.train.ratings)} train, "
        f"{len(split.test.ratings)} test ratings"
    )
    lists, cold = train_base_lists(cfg, split, seed)
    base = {user: normalize_scores(s) for user, s in lists.items() if s.entries}
    cold += [user for user, s in lists.items() if not s.entries]
    if cold:
        log.warning(f"fold {split.fold_id}: {len(cold)} test users without a list")
    if not base:
        raise ExperimentError(f"fold {split.fold_id}: no test user has a base list")
    check_catalog_coverage(base, catalog)
    return FoldInputs(
        split.fold_id,
        base,
        user_tolerances(cfg, split.train, catalog, list(base)),
        relevant_items(split.test, cfg.relevance_threshold),
        len(cold),
    )


def sweep_folds(
    folds: Sequence[FoldInputs],
    cfg: ExperimentConfig,
    catalog: ProviderCatalog,
    template: RerankParams,
    dataset_name: str,
    pool: ThreadPoolExecutor,
) -> list[SweepReport]:
    """Evaluate every (fold, λ) pair on the pool; reports come back in fold order."""

    def point(job: tuple[FoldInputs, float]) -> SweepPoint:
        fold, lam = job
        return sweep_point(
            fold.base_lists, lam, template, fold.tolerances, catalog, fold.relevant
        )

    jobs = [(fold, lam) for fold in folds for lam in cfg.grid]
    points = list(pool.map(point, jobs))
    size = len(cfg.grid)
    reports = []
    for i, fold in enumerate(folds):
        reports.append(
            sweep_report(
                points[i * size : (i + 1) * size],
                template.mode,
                cfg.relevance_threshold,
                dataset_name,
                cfg.recommender,
                fold.cold_users,
            )
        )
        log.info(f"fold {fold.fold_id}: swept {size} λ values")
    return reports


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> SweepReport:
    """Run every fold, merge, and write the output directory.

    Outputs are built in a temporary sibling directory and moved into
    place only when every file is written.
    """
    if violations := validate_config(cfg):
        raise ConfigError("; ".join(violations), violations)
    assert cfg.ratings is not None and cfg.output_dir is not None
    workers = workers or cfg.workers
    output_dir = Path(cfg.output_dir)
    output_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(
        tempfile.mkdtemp(prefix=f".{output_dir.name}.", dir=output_dir.parent)
    )
    try:
        report = _run(cfg, workers, staging)
        if output_dir.exists():
            shutil.rmtree(output_dir)
        staging.rename(output_dir)
    except FaircoverError:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    except (ValueError, OSError) as err:
        shutil.rmtree(staging, ignore_errors=True)
        raise ExperimentError(str(err)) from err
    log.info(f"wrote {output_dir}")
    return report


def _run(cfg: ExperimentConfig, workers: int, staging: Path) -> SweepReport:
    assert cfg.ratings is not None
    provider_seed, fold_seed, *model_seeds = np.random.SeedSequence(cfg.seed).spawn(
        2 + cfg.folds
    )
    dataset = load_ratings(
        cfg.ratings, RatingsSchema(cfg.delimiter), cfg.clamp_negative
    )
    dataset_name = cfg.dataset_name or cfg.ratings.stem
    if cfg.provider_map is not None:
        catalog = load_provider_map(cfg.provider_map)
    else:
        catalog = assign_synthetic_providers(
            dataset, cfg.synthetic_c or 1, cfg.synthetic_p, provider_seed
        )
    weights = (
        load_provider_weights(cfg.provider_weights, catalog)
        if cfg.provider_weights is not None
        else None
    )
    template = make_rerank_params(0.0, cfg.k, cfg.mode, catalog, weights)
    splits = split_folds(dataset, cfg.folds, fold_seed)

    prepare = partial(prepare_fold, cfg=cfg, catalog=catalog)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        folds = list(pool.map(prepare, splits, model_seeds))
        reports = sweep_folds(folds, cfg, catalog, template, dataset_name, pool)

    report = merge_fold_reports(reports)
    choice = apcr_at_ndcg_budget(report, cfg.budget)
    log.info(
        f"APCR@nDCG budget {cfg.budget:g}: λ*={choice.lam:g}, "
        f"APCR {choice.apcr:.4f} ({100 * choice.relative_gain:+.2f}%)"
    )
    star = next(row for row in report.rows if row.lam == choice.lam)
    histogram = histogram_name(choice.lam)
    outputs = {name: staging / file for name, file in config.OUTPUT_FILES.items()}
    emit_report(report, outputs["report"])
    emit_summary(choice, cfg.budget, outputs["summary"])
    emit_tradeoff(tradeoff_curve(report), outputs["tradeoff"])
    emit_histogram(
        exposure_table(
            star.provider_counts,
            report.base_row.provider_counts,
            provider_inventory(catalog, set(dataset.items)),
        ),
        staging / histogram,
    )
    written = [*config.OUTPUT_FILES.values(), histogram]
    if cfg.export_rankings:
        for fold in folds:
            name = f"rankings_fold{fold.fold_id}.tsv"
            export_rankings(fold.base_lists, staging / name)
            written.append(name)
    emit_manifest(
        outputs["manifest"],
        config.VERSION,
        config_echo(cfg),
        describe_dataset(dataset),
        report,
        sorted(written),
    )
    return report
