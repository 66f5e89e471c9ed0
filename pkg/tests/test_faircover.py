#!/usr/bin/env python3
#
# This file is part of faircover
# Licensed under the GPLv3, see <http://www.gnu.org/licenses/gpl-3.0.html>
#
"""Test the command line: subcommands, error lines and exit statuses."""

import pytest

import config
import experiment
from faircover import main
from formats.emit.report import emit_report
from ingest.providers import load_provider_map
from ingest.ratings import load_ratings
from tests.test_experiment import write_config, write_inputs
from types_faircover import SweepReport, SweepRow

LOANS = (
    "user,gender,country,amount\n"
    "a,F,KE,100\n"
    "a,F,KE,105\n"
    "b,M,PE,900\n"
    "b,F,KE,110\n"
)


def test_run_and_validate(tmp_path, capsys):
    write_inputs(tmp_path)
    path = write_config(tmp_path)
    assert main(["validate", str(path)]) == 0
    assert "valid" in capsys.readouterr().out
    assert main(["run", str(path), "--workers", "2"]) == 0
    assert "3 λ values over 3 folds" in capsys.readouterr().out
    assert (tmp_path / "out" / "report.csv").is_file()


def test_invalid_config_exit_status(tmp_path, capsys):
    write_inputs(tmp_path)
    path = write_config(tmp_path, **{"rerank.k": "9"})
    assert main(["validate", str(path)]) == 1
    captured = capsys.readouterr()
    assert captured.out.startswith("rerank.k:")
    assert captured.err.startswith("faircover: error=CONFIG_INVALID ")
    assert main(["run", str(path)]) == 1
    assert not (tmp_path / "out").exists()


def test_missing_config(tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.cfg")]) == 1
    assert "error=CONFIG_INVALID" in capsys.readouterr().err


def test_compare(tmp_path, capsys):
    def report(apcrs):
        rows = tuple(
            SweepRow(lam, ndcg, apcr, {"d1": 1})
            for lam, ndcg, apcr in zip((0, 1, 2), (0.5, 0.45, 0.4), apcrs, strict=True)
        )
        return SweepReport("toy", "wrmf", "FAR", 1, rows)

    emit_report(report((0.4, 0.7, 0.8)), tmp_path / "a.csv")
    emit_report(report((0.4, 0.6, 0.9)), tmp_path / "b.csv")
    assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 0
    assert "1/2 λ values (50.0%)" in capsys.readouterr().out


def test_compare_bad_header(tmp_path, capsys):
    (tmp_path / "a.csv").write_text("x,y\n1,2\n")
    assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "a.csv")]) == 2
    assert "error=DATA_FORMAT" in capsys.readouterr().err


def test_pseudo_items(tmp_path, capsys):
    (tmp_path / "loans.csv").write_text(LOANS)
    ratings, providers = tmp_path / "kiva.tsv", tmp_path / "kiva-providers.tsv"
    argv = ["pseudo-items", str(tmp_path / "loans.csv"), "-p", "country"]
    argv += ["-g", "gender,country,amount", "-a", "amount", "-b", "2", "-k", "0"]
    argv += ["--ratings-out", str(ratings), "--providers-out", str(providers)]
    assert main(argv) == 0
    assert "2 users" in capsys.readouterr().out
    dataset = load_ratings(ratings)
    catalog = load_provider_map(providers)
    assert set(catalog.ownership) == set(dataset.items)
    assert set(catalog.providers) == {"KE", "PE"}


def test_pseudo_items_empty_core(tmp_path, capsys):
    (tmp_path / "loans.csv").write_text(LOANS)
    argv = ["pseudo-items", str(tmp_path / "loans.csv"), "-p", "country"]
    argv += ["-g", "country", "-k", "5"]
    argv += ["--ratings-out", str(tmp_path / "r.tsv")]
    argv += ["--providers-out", str(tmp_path / "p.tsv")]
    assert main(argv) == 2
    assert "error=EXPERIMENT_FAILED" in capsys.readouterr().err
    assert not (tmp_path / "r.tsv").exists()


def test_version(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert capsys.readouterr().out.startswith(f"{config.VERSION} using Python")
    assert experiment.__version__ == config.VERSION


if __name__ == "__main__":
    main(["--version"])
