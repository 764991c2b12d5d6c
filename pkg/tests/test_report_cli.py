"""Configuration, reports, cache and the command-line interface."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from orbitforms.errors import DomainError
from orbitforms.report import (RunConfig, load_whitelist, parse_config_file)
from orbitforms.suites import run_suite


def run_cli(*args, env=None):
    import os
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "orbitforms.cli", *args],
                          capture_output=True, text=True, env=full_env)


# -- configuration -------------------------------------------------------------

def test_config_rejects_unknown_keys():
    with pytest.raises(DomainError):
        RunConfig.from_items({"bogus": 1})


def test_config_rational_round_trip():
    cfg = RunConfig.from_items({"nu2": "22/7"})
    assert cfg.fraction("nu2") == Fraction(22, 7)
    assert cfg.canonical()["nu2"] == "22/7"


def test_config_rejects_float_like_garbage():
    with pytest.raises((DomainError, ValueError)):
        RunConfig.from_items({"nu2": "not-a-number"})


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nseed=9\nnu2=1/3\n")
    items = parse_config_file(path)
    assert items == {"seed": "9", "nu2": "1/3"}
    cfg = RunConfig.from_items(items)
    assert cfg.get("seed") == 9


def test_config_file_rejects_bad_lines(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("just a line\n")
    with pytest.raises(DomainError):
        parse_config_file(path)


def test_whitelist_loads():
    wl = load_whitelist()
    assert "bc1_hidden_linear" in wl
    assert "ttw_radial_power" in wl


# -- determinism and cache ------------------------------------------------------

def test_report_bytes_deterministic():
    cfg = RunConfig.from_items({"command": "verify", "suite": "pi", "seed": 3})
    a = run_suite("pi", cfg).to_bytes()
    b = run_suite("pi", cfg).to_bytes()
    assert a == b


def test_cache_round_trip(tmp_path):
    env = {"ORBITFORMS_CACHE": str(tmp_path)}
    first = run_cli("verify", "--suite", "pi", "--seed", "2", env=env)
    assert first.returncode == 0
    cached = run_cli("verify", "--suite", "pi", "--seed", "2", env=env)
    assert cached.returncode == 0
    assert first.stdout == cached.stdout
    assert len(list(tmp_path.glob("*.json"))) == 1


# -- CLI ------------------------------------------------------------------------

def test_cli_spectrum_bc1():
    res = run_cli("spectrum", "--model", "bc1", "--nu2", "1", "--nu3", "2",
                  "--n", "4", "--no-numeric-check")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert body["dim"] == 5
    values = [e["eigenvalue"] for e in body["entries"]]
    assert values == ["0", "5", "12", "21", "32"]


def test_cli_spectrum_sutherland_dimension():
    res = run_cli("spectrum", "--model", "sutherland", "--N", "3",
                  "--nu", "1/2", "--n", "2", "--no-numeric-check")
    assert res.returncode == 0
    assert json.loads(res.stdout)["dim"] == 6


def test_cli_spectrum_g2_weighted_flag():
    # lattice enumeration oracle: p1 + 2 p2 <= 2 has 4 points
    res = run_cli("spectrum", "--model", "g2", "--nu", "1", "--mu", "1",
                  "--n", "2", "--f", "1,2", "--no-numeric-check")
    assert res.returncode == 0
    assert json.loads(res.stdout)["dim"] == 4


def test_cli_spectrum_csv():
    res = run_cli("spectrum", "--model", "bc1", "--nu2", "1", "--nu3", "2",
                  "--n", "2", "--no-numeric-check", "--format", "csv")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "eigenvalue,multiplicity,quantum_indices"
    assert len(lines) == 4


def test_cli_qes_spectrum():
    res = run_cli("spectrum", "--model", "bc1_qes", "--nu2", "0", "--nu3", "0",
                  "--b", "1", "--n", "1")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert body["exact_trace"] == "7"
    assert len(body["entries"]) == 2


def test_cli_table_rows():
    res = run_cli("table")
    assert res.returncode == 0
    rows = json.loads(res.stdout)["rows"]
    assert rows["E7/trig_minimal"] == [1, 2, 2, 2, 3, 3, 4]
    assert rows["A_N/rational"] == "1^N"
    assert rows["H4/rational"] == [1, 5, 8, 12]


def test_cli_invalid_config_exit_2():
    res = run_cli("spectrum", "--model", "bc1", "--nu2", "0.5x", "--n", "2")
    assert res.returncode == 2
    assert "error" in res.stderr


def test_cli_missing_level_exit_2():
    res = run_cli("spectrum", "--model", "bc1")
    assert res.returncode == 2


def test_cli_unknown_suite_exit_2():
    res = run_cli("verify", "--suite", "bogus")
    assert res.returncode == 2


def test_cli_verify_pass_exit_0(tmp_path):
    out = tmp_path / "rep.json"
    res = run_cli("verify", "--suite", "pi", "--out", str(out))
    assert res.returncode == 0
    body = json.loads(out.read_text())
    assert body["schema"] == "orbit-forms/1"
    assert body["summary"]["fail"] == 0
    assert all(set(c) >= {"name", "status", "exact", "numeric", "witness"}
               for c in body["checks"])


def test_cli_verify_filters_by_model():
    res = run_cli("verify", "--suite", "flags", "--model", "g2")
    assert res.returncode == 0


def test_report_identical_across_output_paths(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("verify", "--suite", "ttw", "--seed", "5", "--out", str(a),
            "--sample-points", "8")
    run_cli("verify", "--suite", "ttw", "--seed", "5", "--out", str(b),
            "--sample-points", "8")
    assert a.read_bytes() == b.read_bytes()


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nu2=1\nnu3=2\nn=2\nnumeric_check=false\n")
    res = run_cli("spectrum", "--model", "bc1", "--config", str(cfg), "--n", "4")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert body["dim"] == 5            # CLI --n overrides the file value
    assert body["config"]["nu3"] == "2"


def test_cli_config_file_unknown_key_exit_2(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("frobnicate=1\n")
    res = run_cli("spectrum", "--model", "bc1", "--n", "2", "--config", str(cfg))
    assert res.returncode == 2


def test_cli_include_timings_flag():
    res = run_cli("verify", "--suite", "pi", "--include-timings")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert all("timing_ms" in c for c in body["checks"])
