"""End-to-end tests of the command-line interface via subprocess."""

import json
import subprocess
import sys

import numpy as np
import pytest

from tritkd.correlations import CRITICAL_VISIBILITY
from tritkd.sweep import CSV_COLUMNS


def tritkd(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "tritkd", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_bell_default_report():
    result = tritkd("bell")
    assert result.returncode == 0
    assert "S = 2.488034" in result.stdout
    assert "Q33 = 1.000000" in result.stdout
    assert "1.732051" in result.stdout
    assert "0.696152" in result.stdout


def test_bell_visibility_scales():
    result = tritkd("bell", "--visibility", "0.5")
    assert result.returncode == 0
    assert "S = 1.244017" in result.stdout


def test_bell_zero_settings():
    zeros = ";".join(["0,0,0"] * 6)
    result = tritkd("bell", "--settings", zeros)
    assert result.returncode == 0
    assert "S = 1.732051" in result.stdout


def test_bell_malformed_settings_is_usage_error():
    assert tritkd("bell", "--settings", "1,2").returncode == 2
    assert tritkd("bell", "--settings", "a,b,c;0,0,0").returncode == 2


def test_unknown_command_is_usage_error():
    assert tritkd("frobnicate").returncode == 2


def test_sweep_csv_schema(tmp_path):
    out = tmp_path / "sweep.csv"
    result = tritkd("sweep", "--steps", "11", "--out", str(out))
    assert result.returncode == 0

    content = out.read_text()
    assert content.endswith("\n")
    lines = content.splitlines()
    comments = [l for l in lines if l.startswith("#")]
    assert comments
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == ",".join(CSV_COLUMNS)
    data = [l.split(",") for l in lines if not l.startswith("#")][1:]
    assert len(data) == 121

    f_col = np.array([float(r[0]) for r in data])
    lam_col = np.array([float(r[1]) for r in data])
    # deterministic ordering: f outer ascending, lam inner ascending
    assert np.all(np.diff(f_col.reshape(11, 11), axis=0) > 0)
    assert np.all(np.diff(lam_col.reshape(11, 11), axis=1) > 0)

    for row in data:
        f, lam, v, p0, p1, e_ab, e_eve, i_ab, i_ae = map(float, row[:9])
        violated, secure = row[9] == "1", row[10] == "1"
        # parsed values are 9-significant-digit renderings
        assert abs(v - f * lam) < 2e-9
        assert abs(p0 + 2 * p1 - 1.0) < 2e-9
        for value in (p0, p1, e_ab, e_eve, i_ab, i_ae):
            assert -1e-12 <= value <= 1.0 + 1e-12
        assert violated == (v >= CRITICAL_VISIBILITY - 1e-12)
        assert secure == (i_ab > i_ae)
        if violated:
            assert e_eve >= e_ab - 1e-12

    # the (1, 1) corner row carries the undisturbed-source values
    corner = data[-1]
    assert abs(float(corner[5])) < 1e-12                 # e_ab
    assert abs(float(corner[6]) - 0.666667) < 1e-6       # e_eve
    assert abs(float(corner[7]) - 1.0) < 1e-12           # i_ab
    assert abs(float(corner[8])) < 1e-12                 # i_ae


def test_sweep_clips_partial_range(tmp_path):
    out = tmp_path / "clip.csv"
    result = tritkd(
        "sweep", "--f-min", "-0.2", "--f-max", "1.3", "--steps", "3", "--out", str(out)
    )
    assert result.returncode == 0
    content = out.read_text()
    assert "clipped f range" in content
    data = [l for l in content.splitlines() if not l.startswith("#")][1:]
    f_vals = sorted({float(r.split(",")[0]) for r in data})
    assert f_vals[0] == 0.0 and f_vals[-1] == 1.0


def test_sweep_rejects_disjoint_range():
    assert tritkd("sweep", "--f-min", "1.5", "--f-max", "2.0", "--out", "x.csv").returncode == 2
    assert tritkd("sweep", "--lam-min", "0.9", "--lam-max", "0.1", "--out", "x.csv").returncode == 2


def test_sweep_unwritable_path_is_io_error(tmp_path):
    result = tritkd("sweep", "--steps", "2", "--out", str(tmp_path / "no" / "dir" / "x.csv"))
    assert result.returncode == 1
    assert result.stderr


def test_crossover_defaults(tmp_path):
    result = tritkd("crossover")
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert abs(payload["v_max"] - 0.6629) <= 5e-4
    assert payload["v_max"] < CRITICAL_VISIBILITY
    assert abs(payload["argmax_f"] * payload["argmax_lam"] - payload["v_max"]) < 1e-12

    coarse = json.loads(tritkd("crossover", "--tolerance", "1e-4").stdout)
    assert abs(coarse["v_max"] - payload["v_max"]) < 1e-4


def test_crossover_base_invariant():
    base3 = json.loads(tritkd("crossover").stdout)
    base2 = json.loads(tritkd("crossover", "--log-base", "2").stdout)
    assert abs(base3["v_max"] - base2["v_max"]) < 2e-6


def test_simulate_reproducible_bytes(tmp_path):
    args = ("simulate", "--trials", "20000", "--seed", "42", "--honest")
    first = tmp_path / "a"
    second = tmp_path / "b"
    sharded = tmp_path / "c"
    assert tritkd(*args, "--out", str(first)).returncode == 0
    assert tritkd(*args, "--out", str(second)).returncode == 0
    assert tritkd(*args, "--out", str(sharded), "--workers", "4").returncode == 0

    t1 = (first / "transcript.tsv").read_bytes()
    assert t1 == (second / "transcript.tsv").read_bytes()
    assert t1 == (sharded / "transcript.tsv").read_bytes()
    s1 = (first / "summary.json").read_bytes()
    assert s1 == (second / "summary.json").read_bytes()
    assert s1 == (sharded / "summary.json").read_bytes()


def test_simulate_attack_summary():
    result = tritkd("simulate", "--trials", "60000", "--seed", "7", "--f", "0.9", "--lam", "0.8")
    assert result.returncode == 0
    summary = json.loads(result.stdout)
    n = summary["sifted_length"]
    assert abs(summary["qber"] - 0.186667) < 3 * np.sqrt(0.186667 * (1 - 0.186667) / n)
    assert summary["aborted"] is False
    assert summary["source"] == "attack"


def test_simulate_undisturbed_attack():
    result = tritkd("simulate", "--trials", "20000", "--seed", "3", "--f", "1", "--lam", "1")
    summary = json.loads(result.stdout)
    assert summary["qber"] == 0.0
    assert summary["aborted"] is False


def test_simulate_flag_validation():
    assert tritkd("simulate", "--trials", "10", "--seed", "1").returncode == 2
    assert tritkd("simulate", "--trials", "10", "--seed", "1", "--f", "0.5").returncode == 2
    assert (
        tritkd("simulate", "--trials", "10", "--seed", "1", "--honest", "--f", "1", "--lam", "1").returncode
        == 2
    )
    assert tritkd("simulate", "--trials", "10", "--seed", "1", "--f", "1.5", "--lam", "1").returncode == 2
    assert (
        tritkd("simulate", "--trials", "10", "--seed", "1", "--honest", "--weights", "1,2,3").returncode
        == 2
    )
    assert (
        tritkd("simulate", "--trials", "10", "--seed", "1", "--honest", "--workers", "0").returncode
        == 2
    )


def test_simulate_unwritable_out_is_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    result = tritkd(
        "simulate", "--trials", "10", "--seed", "1", "--honest", "--out", str(blocker / "sub")
    )
    assert result.returncode == 1
