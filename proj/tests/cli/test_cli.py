import csv
import io
import json
import os
import subprocess

import pytest

CLI = os.environ["PFREAL_CLI"]
SYSTEMS = os.environ["PFREAL_SYSTEMS"]
TABLE1 = os.path.join(SYSTEMS, "table1.json")


def run(*args, env=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=env)


def test_bound():
    r = run("bound", "--n", "4")
    assert r.returncode == 0
    assert r.stdout.split() == ["complex_bound", "20", "bezout_bound", "64"]


def test_solve_csv_table1():
    r = run("solve", "--system", TABLE1)
    assert r.returncode == 0
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert len(rows) == 20
    assert sum(row["is_real"] == "1" for row in rows) == 16
    assert sum(row["is_trivial"] == "1" for row in rows) == 8
    assert list(rows[0])[:7] == ["sol_id", "vd2", "vq2", "vd3", "vq3", "vd4", "vq4"]


def test_solve_json_and_determinism():
    a = run("solve", "--system", TABLE1, "--format", "json", "--seed", "5")
    b = run("solve", "--system", TABLE1, "--format", "json", "--seed", "5")
    assert a.returncode == 0 and a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert (doc["n_complex"], doc["n_real"], doc["n_trivial"]) == (20, 16, 8)


def test_eliminant():
    r = run("eliminant", "--system", TABLE1)
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["sturm_positive"] == 4
    assert doc["real_via_eliminant"] == doc["real_direct"] == 16


def test_eliminant_b12_zero():
    r = run("eliminant", "--system", os.path.join(SYSTEMS, "table1_b12_zero.json"))
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert len(doc["coefficients_descending"]) == 5
    assert doc["real_direct"] == 16


def test_monodromy_json():
    r = run("monodromy", "--system", TABLE1, "--budget", "25", "--seed", "1")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["order"] == "46080"
    assert len(doc["fixed_points"]) == 8
    assert sorted(len(b) for b in doc["blocks"]) == [2] * 6
    assert all(1 <= p <= 20 for p in doc["fixed_points"])


def test_survey_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    env = dict(os.environ, PFREAL_WORKERS="2")
    r1 = run("survey", "--n", "30", "--seed", "1", "--out", str(out1))
    r2 = run("survey", "--n", "30", "--seed", "1", "--out", str(out2), env=env)
    assert r1.returncode == 0 and r2.returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert r1.stdout == r2.stdout
    summary = json.loads(r1.stdout)
    assert sum(summary["histogram"].values()) + summary["failures"] == 30
    header = out1.read_text().splitlines()[0]
    assert header == "instance,seed_offset,b12,b13,b14,b23,b24,b34,n_complex,n_real,n_trivial,status"


@pytest.mark.parametrize(
    "args",
    [
        ["solve"],
        ["solve", "--system", TABLE1, "--bogus"],
        ["solve", "--system", TABLE1, "--format", "xml"],
        ["frobnicate"],
        [],
        ["bound", "--n", "1"],
    ],
)
def test_usage_errors_exit_2(args):
    assert run(*args).returncode == 2


def test_malformed_and_invalid_systems_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"buses": [')
    assert run("solve", "--system", str(bad)).returncode == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text('{"buses": [], "lines": [], "comment": "x"}')
    assert run("solve", "--system", str(unknown)).returncode == 2
    assert run("solve", "--system", str(tmp_path / "missing.json")).returncode == 2


def test_structural_error_exits_nonzero(tmp_path):
    # b = 0 on every line: positive-dimensional solution set, eliminant pairing breaks down
    doc = json.load(open(TABLE1))
    for line in doc["lines"]:
        line["b"] = 0.0
    path = tmp_path / "flat.json"
    path.write_text(json.dumps(doc))
    r = run("eliminant", "--system", str(path))
    assert r.returncode != 0
    assert "error" in r.stderr
