import csv
import io
import json
import subprocess
import sys

import warnings

import pytest

from zenorate import MeasurementSchedule, PhysicalParams, repeated_rate, survival_ratio
from zenorate import cli, zeno
from zenorate.exceptions import QuadratureDomainError, QuadratureWarning
from zenorate.cli import (EXIT_NO_CROSSOVER, EXIT_NUMERICAL, EXIT_USAGE, GridSpec, UsageError,
                          main, read_config_file)

T_STAR = 13.558132267102314


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, value = line[2:].split(": ", 1)
            meta[key] = value
        else:
            body.append(line)
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_rate_matches_library_bit_for_bit(capsys):
    code, out, _ = run_cli(capsys, "rate", "--t", "5", "--n", "20", "--gamma", "0.1", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    p = PhysicalParams(gamma=0.1)
    assert row["r_single"] == survival_ratio(5.0, p)
    assert row["r_repeated"] == repeated_rate(MeasurementSchedule(5.0, 20), p)
    assert row["regime"] == "ZENO"


def test_csv_and_json_carry_identical_values(capsys):
    args = ["sweep", "--grid", "0:50:26", "--n", "20"]
    _, out_csv, _ = run_cli(capsys, *args)
    _, out_json, _ = run_cli(capsys, *args, "--format", "json")
    meta, rows = parse_csv(out_csv)
    doc = json.loads(out_json)
    assert len(rows) == len(doc["rows"]) == 26
    for r_csv, r_json in zip(rows, doc["rows"]):
        for key in ("t", "r_single", "r_repeated"):
            assert float(r_csv[key]) == r_json[key]
        assert r_csv["regime"] == r_json["regime"]
    assert meta["units"] == doc["metadata"]["units"]
    assert float(meta["gamma"]) == doc["metadata"]["gamma"]


def test_t_zero_row(capsys):
    _, out, _ = run_cli(capsys, "sweep", "--grid", "0:1:2", "--format", "json")
    first = json.loads(out)["rows"][0]
    assert (first["r_single"], first["r_repeated"], first["regime"]) == (1.0, 1.0, "NEUTRAL")


def test_figure_presets(capsys):
    _, out, _ = run_cli(capsys, "figure", "--preset", "fig1", "--format", "json")
    rows = json.loads(out)["rows"]
    assert len(rows) == 101
    assert all(r["regime"] == "ZENO" for r in rows if r["t"] > 0)

    _, out, _ = run_cli(capsys, "figure", "--preset", "fig2", "--format", "json")
    labels = [r["regime"] for r in json.loads(out)["rows"] if r["regime"] != "NEUTRAL"]
    assert sum(u != v for u, v in zip(labels, labels[1:])) == 1
    assert labels[0] == "ZENO" and labels[-1] == "ANTI_ZENO"


def test_crossover(capsys):
    code, out, _ = run_cli(capsys, "crossover", "--n", "20", "--window", "0.1:400", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["t_star"] == pytest.approx(T_STAR, rel=1e-9)
    assert row["bracket_lo"] <= row["t_star"] <= row["bracket_hi"]
    assert row["multiple_roots"] is False


def test_no_crossover_exit_code(capsys):
    code, out, err = run_cli(capsys, "crossover", "--n", "1")
    assert code == EXIT_NO_CROSSOVER
    assert out == ""
    diag = json.loads(err)
    assert diag["error"] == "no-crossover"
    assert len(diag["delta_at_ends"]) == 2


def test_integral_rows(capsys):
    _, out, _ = run_cli(capsys, "integral", "--grid", "1e-4:1e4:2:log", "--format", "json")
    small, large = json.loads(out)["rows"]
    assert abs(small["rel_dev_small"]) <= 1e-2
    assert abs(large["rel_dev_large"]) <= 1e-2


def test_integral_rejects_nonpositive_row(capsys):
    code, out, _ = run_cli(capsys, "integral", "--grid", "0:1:2", "--format", "json")
    assert code == 0
    bad, good = json.loads(out)["rows"]
    assert bad["error"] and bad["I"] is None
    assert good["error"] is None and good["I"] > 0


@pytest.mark.parametrize("argv", [
    ["sweep"],
    ["rate"],
    ["rate", "--t", "-1"],
    ["rate", "--t", "1", "--gamma", "-0.1"],
    ["sweep", "--grid", "5:1:3"],
    ["sweep", "--grid", "0:1"],
    ["crossover", "--window", "3:1"],
    ["rate", "--t", "1", "--n", "0"],
    ["bogus"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


@pytest.mark.parametrize("exc", [QuadratureWarning("I(5.0) did not converge"),
                                 QuadratureDomainError("integrand is not finite", abscissa=0.0)])
def test_numerical_failure_exit_3(exc, monkeypatch, capsys):
    def failing(*args, **kwargs):
        if isinstance(exc, Warning):
            warnings.warn(exc)
        raise exc

    monkeypatch.setattr(cli, "survival_ratio", failing)
    code, out, err = run_cli(capsys, "rate", "--t", "5")
    assert code == EXIT_NUMERICAL
    assert out == ""
    assert json.loads(err)["error"] == "numerical"


def test_sweep_failure_lists_points(monkeypatch, capsys):
    monkeypatch.setattr(zeno, "survival_ratio", lambda t, p, cfg: 1.0)
    monkeypatch.setattr(zeno, "repeated_rate", lambda s, p, cfg: 1.0 / (s.total_time - 1.0))
    code, _, err = run_cli(capsys, "sweep", "--grid", "0:2:3")
    assert code == EXIT_NUMERICAL
    assert [f["t"] for f in json.loads(err)["failures"]] == [1.0]


def test_config_file_then_flags(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# comment\ngamma = 1.0\nn = 4\nformat = json\n", encoding="utf-8")
    _, out, _ = run_cli(capsys, "rate", "--config", str(conf), "--t", "2", "--n", "8")
    meta = json.loads(out)["metadata"]
    assert meta["gamma"] == 1.0
    assert meta["n"] == 8


def test_config_file_errors(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = red\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(conf)
    with pytest.raises(UsageError):
        read_config_file(tmp_path / "missing.conf")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rate.csv"
    code, out, _ = run_cli(capsys, "rate", "--t", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes().count(b"\r") == 0
    assert parse_csv(target.read_text())[1][0]["t"] == "1.0"


@pytest.mark.parametrize("text, expected", [
    ("0:5:3", [0.0, 2.5, 5.0]),
    ("1:100:3:log", [1.0, 10.0, 100.0]),
    ("7:7:1", [7.0]),
])
def test_grid_spec(text, expected):
    assert GridSpec.parse(text).values() == pytest.approx(expected, rel=1e-15)


def test_subprocess_byte_identical():
    cmd = [sys.executable, "-m", "zenorate", "sweep", "--grid", "0:20:11"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert first.startswith(b"# tool: zenorate\n")
