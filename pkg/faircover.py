#!/usr/bin/env python3
r"""Fairness-aware re-ranking experiments from the command line.

    faircover.py run experiment.cfg --workers 4
    faircover.py validate experiment.cfg
    faircover.py compare far/report.csv pfar/report.csv
    faircover.py pseudo-items loans.csv --provider country \
        --grouping gender,country,sector --amount loan_amount \
        --ratings-out kiva.tsv --providers-out kiva-providers.tsv

Errors print one line, `faircover: error=<CODE> <message>`, to standard
error; the exit status is 1 for an invalid config and 2 for anything else.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"
__version__ = "0.1.0"

import argparse  # http://docs.python.org/dev/library/argparse.html
import logging as log
import sys
from pathlib import Path

import config
from errors import ConfigError, ExperimentError, FaircoverError
from evaluate.sweep import dominance_fraction
from experiment import read_config, run_experiment, validate_config
from formats.emit.report import read_report
from ingest.kcore import k_core_filter
from ingest.providers import restrict_catalog, save_provider_map
from ingest.ratings import save_ratings
from ingest.transactions import build_pseudo_items, load_transactions
from utils.text import split_list


def run(args: argparse.Namespace) -> int:
    report = run_experiment(read_config(args.config), args.workers)
    print(f"{len(report.rows)} λ values over {report.folds} folds")
    return 0


def validate(args: argparse.Namespace) -> int:
    if violations := validate_config(read_config(args.config)):
        for violation in violations:
            print(violation)
        raise ConfigError(f"{len(violations)} violations in {args.config}", violations)
    print(f"{args.config}: valid")
    return 0


def compare(args: argparse.Namespace) -> int:
    """Report how often A's APCR matches or beats B's at equal nDCG loss."""
    a, b = read_report(args.report_a), read_report(args.report_b)
    fraction, compared = dominance_fraction(a, b)
    print(
        f"{args.report_a.name} >= {args.report_b.name} on "
        f"{round(fraction * compared)}/{compared} λ values ({100 * fraction:.1f}%)"
    )
    return 0


def pseudo_items(args: argparse.Namespace) -> int:
    """Turn a transactions table into a pseudo-item ratings file and provider map."""
    records = load_transactions(
        args.transactions, args.provider, args.user, args.delimiter
    )
    dataset, catalog = build_pseudo_items(
        records, split_list(args.grouping), args.amount, args.bins
    )
    if args.core > 0:
        dataset = k_core_filter(dataset, args.core)
    if not dataset.ratings:
        raise ExperimentError(f"nothing survives the {args.core}-core")
    catalog = restrict_catalog(catalog, dataset.items)
    save_ratings(dataset, args.ratings_out)
    save_provider_map(catalog, args.providers_out)
    print(
        f"{dataset.m} users, {dataset.n} pseudo-items, {catalog.c} providers "
        f"-> {args.ratings_out}, {args.providers_out}"
    )
    return 0


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def process_arguments(argv: list[str]) -> argparse.Namespace:
    """Process arguments."""
    arg_parser = argparse.ArgumentParser(
        description="""Re-rank recommendations for provider coverage (FAR/PFAR)
        and evaluate the accuracy/coverage trade-off."""
    )
    arg_parser.add_argument(
        "-L",
        "--log-to-file",
        action="store_true",
        default=False,
        help=f"log to file {config.LOG_FILE}",
    )
    arg_parser.add_argument(
        "-V",
        "--verbose",
        action="count",
        default=0,
        help="increase verbosity from critical though error, warning, info, and debug",
    )
    arg_parser.add_argument(
        "--version",
        action="version",
        version=f"{__version__} using Python {sys.version}",
    )
    commands = arg_parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="run an experiment config")
    run_parser.add_argument("config", type=Path, metavar="CONFIG")
    run_parser.add_argument(
        "-w",
        "--workers",
        type=positive_int,
        default=None,
        help="worker threads for folds and λ values (default: experiment.workers)",
    )
    run_parser.set_defaults(func=run)

    validate_parser = commands.add_parser("validate", help="check a config")
    validate_parser.add_argument("config", type=Path, metavar="CONFIG")
    validate_parser.set_defaults(func=validate)

    compare_parser = commands.add_parser(
        "compare", help="compare two report.csv files at matched nDCG loss"
    )
    compare_parser.add_argument("report_a", type=Path, metavar="REPORT_A")
    compare_parser.add_argument("report_b", type=Path, metavar="REPORT_B")
    compare_parser.set_defaults(func=compare)

    pseudo_parser = commands.add_parser(
        "pseudo-items", help="aggregate transactions into pseudo-item ratings"
    )
    pseudo_parser.add_argument("transactions", type=Path, metavar="TRANSACTIONS")
    pseudo_parser.add_argument(
        "-p", "--provider", required=True, help="attribute naming the provider"
    )
    pseudo_parser.add_argument(
        "-g",
        "--grouping",
        required=True,
        help="comma list of attributes defining a pseudo-item",
    )
    pseudo_parser.add_argument("-u", "--user", default="user", help="user column")
    pseudo_parser.add_argument(
        "-a", "--amount", default=None, help="numeric attribute to bin"
    )
    pseudo_parser.add_argument(
        "-b", "--bins", type=positive_int, default=config.AMOUNT_BINS
    )
    pseudo_parser.add_argument(
        "-k",
        "--core",
        type=int,
        default=config.CORE_K,
        help="k-core threshold; 0 disables (default: %(default)s)",
    )
    pseudo_parser.add_argument(
        "-d", "--delimiter", default=config.TRANSACTIONS_DELIMITER
    )
    pseudo_parser.add_argument("--ratings-out", type=Path, required=True)
    pseudo_parser.add_argument("--providers-out", type=Path, required=True)
    pseudo_parser.set_defaults(func=pseudo_items)

    args = arg_parser.parse_args(argv)

    log_level = (log.CRITICAL) - (args.verbose * 10)
    LOG_FORMAT = "%(levelname).4s %(funcName).10s:%(lineno)-4d| %(message)s"
    if args.log_to_file:
        log.basicConfig(
            filename=config.LOG_FILE, filemode="w", level=log_level, format=LOG_FORMAT
        )
    else:
        log.basicConfig(level=log_level, format=LOG_FORMAT)
    return args


def main(argv: list[str] | None = None) -> int:
    args = process_arguments(sys.argv[1:] if argv is None else argv)
    try:
        return args.func(args)
    except FaircoverError as err:
        print(f"faircover: error={err.code} {err}", file=sys.stderr)
        return err.exit_status
    except (ValueError, OSError) as err:
        print(f"faircover: error={ExperimentError.code} {err}", file=sys.stderr)
        return ExperimentError.exit_status


if __name__ == "__main__":
    sys.exit(main())
