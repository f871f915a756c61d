"""Every JSON document the CLI emits must validate against docs/cli_schema.json."""

import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

CLI = os.environ["PRIMEXP_CLI"]
SCHEMA_PATH = pathlib.Path(os.environ["PRIMEXP_SCHEMA"])
REPO_ROOT = SCHEMA_PATH.parent.parent

with open(SCHEMA_PATH) as fh:
    SCHEMA = json.load(fh)


def run(*args):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    return proc


def check(doc, name):
    jsonschema.Draft7Validator(SCHEMA[name]).validate(doc)


def test_constants_output():
    proc = run("constants")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    check(doc, "constants")
    assert sorted(doc["e"]) == ["2", "3", "4", "5", "E", "O", "S"]


def test_scan_output():
    proc = run("scan", "--max-x", "100000", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    check(doc, "scan")
    assert "checkpoints" not in doc

    proc = run("scan", "--max-x", "100000", "--format", "json",
               "--checkpoints", "geometric", "--stats", "M", "--powers", "1")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    check(doc, "scan")
    assert doc["stats"] == ["M"] and doc["powers"] == [1]
    assert doc["checkpoints"]


def test_scan_schema_rejects_performance_knobs():
    proc = run("scan", "--max-x", "10000", "--format", "json")
    doc = json.loads(proc.stdout)
    doc["workers"] = 4
    with pytest.raises(jsonschema.ValidationError):
        check(doc, "scan")


def test_scan_state_file(tmp_path):
    state = tmp_path / "scan.state.json"
    proc = run("scan", "--max-x", "100000", "--format", "json", "--state", str(state))
    assert proc.returncode == 0
    check(json.loads(state.read_text()), "scan_state")


def test_counts_output():
    for args in (("--kind", "kfree", "--k", "2", "--x", "100000"),
                 ("--kind", "kfull", "--k", "3", "--x", "100000")):
        proc = run("counts", *args)
        assert proc.returncode == 0
        check(json.loads(proc.stdout), "counts")


def test_dist_moments_output():
    proc = run("dist", "--f", "f1", "--moments")
    assert proc.returncode == 0
    check(json.loads(proc.stdout), "dist_moments")


def test_verify_report_and_baselines():
    baselines = REPO_ROOT / "data" / "verify_baselines.json"
    check(json.loads(baselines.read_text()), "baselines")

    proc = run("verify", "--suite", "counts", "--max-x", "10000",
               "--baselines", str(baselines))
    assert proc.returncode == 0, proc.stderr
    check(json.loads(proc.stdout), "verify_report")
