import json
import os
import subprocess

import pytest

CLI = os.environ.get("GREEDYLAB_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="GREEDYLAB_CLI not set")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_norm_json():
    r = run("norm", "--space", '{"kind":"lp","p":0.5}', "--vector", "[1,1,0,1]")
    assert r.returncode == 0
    assert json.loads(r.stdout)["norm"] == pytest.approx(9.0)


def test_exit_codes():
    assert run("norm", "--space", '{"kind":"lp"}', "--vector", "[1]").returncode == 2
    assert run("norm", "--space", "{not json", "--vector", "[1]").returncode == 2
    assert run("experiment", "--preset", "nope").returncode == 2
    assert run("experiment", "--config", '{"experiment":"mixed-mu","schedule":[]}').returncode == 2
    assert run().returncode == 2
    assert run("--help").returncode == 0
    # a norm beyond double range
    big = run("norm", "--space", '{"kind":"lp","p":0.01}', "--vector", "[1e300,1e300]")
    assert big.returncode == 3


def test_experiment_csv(tmp_path):
    out = tmp_path / "mu.csv"
    cfg = '{"experiment":"mixed-mu","schedule":[1,2,3],"params":{"block":8}}'
    r = run("experiment", "--config", cfg, "--seed", "5", "--out", str(out))
    assert r.returncode == 0
    lines = out.read_bytes().split(b"\n")
    assert lines[0].startswith(b"experiment,seed,")
    assert lines[1].startswith(b"mixed-mu,5,")
    assert b"\r" not in out.read_bytes()
    again = tmp_path / "again.csv"
    run("--threads", "2", "experiment", "--config", cfg, "--seed", "5", "--out", str(again))
    assert again.read_bytes() == out.read_bytes()


def test_democracy_and_marriage():
    r = run("democracy", "--space", '{"kind":"lp","p":0.25}', "--m-list", "1,2,3")
    assert r.returncode == 0
    rows = r.stdout.strip().split("\n")
    assert rows[0].split(",")[:5] == ["experiment", "seed", "m", "phi_u", "phi_l"]
    assert rows[3].split(",")[3] == "81"
    m = json.loads(run("marriage", "--sets", "[[1,2],[2]]", "--K", "1").stdout)
    assert m["feasible"] and m["solution"]["partner"] == [1, 2]
