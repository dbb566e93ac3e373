import json
import os
import subprocess
import sys

import numpy as np
import pytest

from e8lie.halfint import HalfIntMatrix
from e8lie.io import read_bundle, write_bundle


def test_bundle_roundtrip_bin(tmp_path):
    m = HalfIntMatrix(np.arange(-6, 6, dtype=np.int64).reshape(3, 4))
    base = str(tmp_path / "m")
    header = write_bundle(base, "test-matrix", m, fmt="bin")
    name, back = read_bundle(header)
    assert name == "test-matrix"
    assert back == m


def test_bundle_roundtrip_csv(tmp_path):
    m = HalfIntMatrix(np.array([[1, -2], [0, 7]], dtype=np.int64))
    header = write_bundle(str(tmp_path / "m"), "csv-matrix", m, fmt="csv")
    _, back = read_bundle(header)
    assert back == m


def test_bundle_roundtrip_f64(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.normal(size=(5, 7))
    header = write_bundle(str(tmp_path / "f"), "float-matrix", a)
    _, back = read_bundle(header)
    assert np.array_equal(back, a)  # bit-exact


def test_bundle_int32_overflow_rejected(tmp_path):
    m = HalfIntMatrix(np.array([[2**40]], dtype=np.int64))
    with pytest.raises(ValueError):
        write_bundle(str(tmp_path / "m"), "big", m)


def test_no_temp_files_left(tmp_path):
    m = HalfIntMatrix.identity(4)
    write_bundle(str(tmp_path / "m"), "id", m)
    leftovers = [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")]
    assert leftovers == []


def _run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "e8lie", *args],
        capture_output=True,
        text=True,
        **kw,
    )


def test_cli_version():
    r = _run_cli(["--version"])
    assert r.returncode == 0
    assert "format 1" in r.stdout


def test_cli_usage_error_exit_2():
    r = _run_cli(["frobnicate"])
    assert r.returncode == 2


def test_cli_region_check():
    r = _run_cli(["region", "--check", "0,0,0,0,0,0,0,0"])
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["in_region_roots"] is True
    assert out["in_region_solved"] is True
    # config echo goes to stderr
    assert '"config"' in r.stderr


def test_cli_region_sample_deterministic():
    r1 = _run_cli(["region", "--sample", "3", "--seed", "5"])
    r2 = _run_cli(["region", "--sample", "3", "--seed", "5"])
    assert r1.stdout == r2.stdout
    out = json.loads(r1.stdout)
    assert len(out["samples"]) == 3


def test_cli_roots_reproducible(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert _run_cli(["roots", "--out", a]).returncode == 0
    assert _run_cli(["roots", "--out", b]).returncode == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    data = json.loads(open(a).read())
    assert len(data["roots_doubled"]) == 240
    assert data["marks"] == [2, 3, 4, 6, 5, 4, 3, 2]


def test_cli_verify_clifford():
    r = _run_cli(["verify", "--suite", "clifford"])
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["passed"] is True
    names = {s["name"] for s in out["suites"]}
    assert "clifford-anticommutation" in names


def test_cli_element_bundle(tmp_path):
    base = str(tmp_path / "elem")
    r = _run_cli(
        ["element", "--y", "0.05,0.06,0.07,0.08,0.09,0.1,0.11,0.5",
         "--x-random", "--z-random", "--seed", "3", "--out", base]
    )
    assert r.returncode == 0
    _, g = read_bundle(base + ".json")
    assert g.shape == (248, 248)
    assert np.abs(g.T @ g - np.eye(248)).max() < 1e-8


def test_cli_generate(tmp_path):
    out = str(tmp_path / "gen")
    r = _run_cli(["generate", "--out-dir", out, "--format", "csv"])
    assert r.returncode == 0
    headers = sorted(f for f in os.listdir(out) if f.endswith(".json"))
    assert len(headers) == 16 + 120
    name, sigma1 = read_bundle(os.path.join(out, "sigma_01.json"))
    assert name == "sigma_1"
    assert sigma1.rows == sigma1.cols == 128
