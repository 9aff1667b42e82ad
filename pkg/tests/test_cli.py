import json
import os
from pathlib import Path

import pytest

from pairmind.cli import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK, EXIT_USAGE, main
from pairmind.qlearn import QTable, save_qtable


@pytest.fixture(autouse=True)
def pinned_timestamp(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


def run(args):
    return main(args)


def test_usage_error_exit_code(capsys):
    assert run(["no-such-command"]) == EXIT_USAGE
    assert run(["simulate"]) == EXIT_USAGE     # missing policy argument


def test_config_error_exit_code(tmp_path):
    assert run(["simulate", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["train", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_train_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "run"
    assert run(["train", "--episodes", "50", "--seed", "3", "--out", str(out)]) == EXIT_OK
    table = json.loads((out / "qtable.json").read_text())
    assert len(table["states"]) == 48
    assert table["meta"]["seed"] == 3
    curve = (out / "training_curve.csv").read_text().strip().split("\n")
    assert len(curve) == 52   # header comment + column row + 50 episodes


def test_train_rerun_identical_bytes(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        assert run(["train", "--episodes", "40", "--seed", "3", "--out", str(out)]) == EXIT_OK
    assert (out_a / "qtable.json").read_bytes() == (out_b / "qtable.json").read_bytes()
    assert (out_a / "training_curve.csv").read_bytes() == (out_b / "training_curve.csv").read_bytes()


def test_simulate_prints_mean(tmp_path, capsys):
    assert run(["simulate", "perfect", "--n-games", "30", "--seed", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "mean_moves=" in out and "arm=perfect" in out


def test_simulate_writes_csv(tmp_path):
    assert run([
        "simulate", "none", "--n-games", "5", "--seed", "1", "--out", str(tmp_path),
    ]) == EXIT_OK
    files = list(tmp_path.glob("simulate_*.csv"))
    assert len(files) == 1
    lines = files[0].read_text().strip().split("\n")
    assert lines[0].startswith("# ")
    assert len(lines) == 7   # header + columns + 5 games


def test_eval_policy_pass_and_fail(tmp_path, capsys):
    from conftest import structured_policy_table

    good = tmp_path / "good.json"
    save_qtable(structured_policy_table(), str(good))
    assert run(["eval-policy", str(good)]) == EXIT_OK
    assert "PASS" in capsys.readouterr().out

    zero = tmp_path / "zero.json"
    save_qtable(QTable.zeros(), str(zero))
    assert run(["eval-policy", str(zero)]) == EXIT_CHECK_FAILED
    assert "FAIL" in capsys.readouterr().out


def test_eval_policy_missing_file(tmp_path):
    assert run(["eval-policy", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_compare_zero_deltas(tmp_path, capsys):
    assert run([
        "simulate", "perfect", "--n-games", "5", "--seed", "1", "--out", str(tmp_path),
    ]) == EXIT_OK
    stats = next(tmp_path.glob("simulate_*.csv"))
    assert run(["compare", str(stats), str(stats)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "mean_moves=+0.0000" in out or "mean_moves=-0.0000" in out


def test_export_roundtrip(tmp_path):
    assert run([
        "simulate", "none", "--n-games", "4", "--seed", "9", "--out", str(tmp_path),
    ]) == EXIT_OK
    source = next(tmp_path.glob("simulate_*.csv"))
    as_json = tmp_path / "stats.json"
    back = tmp_path / "back.csv"
    assert run(["export", str(source), "--format", "json", "--dest", str(as_json)]) == EXIT_OK
    assert run(["export", str(as_json), "--format", "csv", "--dest", str(back)]) == EXIT_OK
    assert back.read_bytes() == source.read_bytes()


def test_export_empty_stats(tmp_path):
    src = tmp_path / "s.json"
    src.write_text('{"config": {}, "games": []}')
    assert run(["export", str(src), "--format", "csv", "--dest", str(tmp_path / "o")]) == EXIT_OK


def test_serve_missing_policy_dir(tmp_path):
    assert run(["serve", "--policy-dir", str(tmp_path / "none")]) == EXIT_CONFIG
