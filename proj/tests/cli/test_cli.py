# Copyright 2026 The postprice Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the postprice command line tool."""

import csv
import io
import json
import os
import subprocess

import pytest

CLI = os.environ.get("POSTPRICE_CLI", "postprice")


def run(*args, check_code=None):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=120)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def run_json(*args):
    return json.loads(run(*args, check_code=0).stdout)


def test_myerson_uniform():
    out = run_json("myerson", "uniform:0,1")
    assert out["price"] == pytest.approx(0.5, abs=1e-7)
    assert out["revenue"] == pytest.approx(0.25)
    assert run_json("myerson", "--dist", "beta:4,2")["price"] == pytest.approx(
        0.5356917243, abs=1e-7
    )


def test_optimize_beats_fixed_price():
    out = run_json("optimize", "--gs", "0.8", "--gb", "0.2", "--horizon", "2")
    assert out["ratio"] > 1.0
    assert out["value"] == pytest.approx(0.484034, abs=1e-6)
    assert out["solver"]["converged"]
    assert set(out["tree"]["prices"]) == {"", "0", "1"}


def test_equal_rates_give_ratio_one():
    out = run_json("optimize", "--gs", "0.5", "--gb", "0.5", "--horizon", "3")
    assert out["ratio"] == pytest.approx(1.0, abs=1e-9)


def test_rate_order_warning_exits_one():
    proc = run("optimize", "--gs", "0.2", "--gb", "0.8", "--horizon", "2", check_code=1)
    assert "warning" in proc.stderr
    assert json.loads(proc.stdout)["warnings"]


def test_usage_errors_exit_two():
    assert run("myerson", "bogus").returncode == 2
    assert run("optimize", "--gs", "1.5", "--gb", "0.2").returncode == 2
    assert run("no-such-command").returncode == 2


def test_regularity_collision_and_perturbation():
    golden = "0.6180339887498949"
    assert run("optimize", "--gs", "0.9", "--gb", golden, "--horizon", "3").returncode == 3
    out = run(
        "optimize", "--gs", "0.9", "--gb", golden, "--horizon", "3", "--perturb", "1e-6"
    )
    assert out.returncode in (0, 1)


def test_negative_price_tree_reports_pointer(tmp_path):
    tree = tmp_path / "neg.json"
    tree.write_text('{"horizon":2,"prices":{"":0.5,"0":-0.3,"1":0.5}}')
    proc = run("simulate", "--tree", str(tree), "--gs", "0.5", "--gb", "0.5", check_code=3)
    assert "/prices/0" in proc.stderr


def test_io_errors_exit_four(tmp_path):
    assert run("myerson", "uniform:0,1", "--out", "/nonexistent/dir/x.json").returncode == 4
    missing = tmp_path / "missing.json"
    assert run("simulate", "--tree", str(missing), "--gs", "0.5", "--gb", "0.5").returncode == 4


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gs": 0.5, "gb": 0.5, "horizon": 2}))
    out = run_json("optimize", "--config", str(cfg), "--gb", "0.2")
    assert out["gs"] == 0.5
    assert out["gb"] == 0.2
    assert out["horizon"] == 2


def test_output_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["optimize", "--gs", "0.8", "--gb", "0.3", "--horizon", "3", "--seed", "7"]
    run(*args, "--out", str(a), check_code=0)
    run(*args, "--out", str(b), check_code=0)
    assert a.read_bytes() == b.read_bytes()


def test_simulate_constant_tree(tmp_path):
    tree = tmp_path / "c.json"
    tree.write_text('{"horizon":2,"prices":{"":0.5,"0":0.5,"1":0.5}}')
    text = run(
        "simulate", "--tree", str(tree), "--gs", "0.5", "--gb", "0.5", "--grid", "11",
        check_code=0,
    ).stdout
    lines = text.splitlines()
    assert lines[-1].startswith("# expected_revenue,")
    assert float(lines[-1].split(",")[1]) == pytest.approx(0.375)
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[:-1]))))
    assert len(rows) == 11
    for r in rows:
        assert r["strategy"] == ("11" if float(r["v"]) >= 0.5 else "00")


def test_sweep_outputs(tmp_path):
    text = run("sweep", "--preset", "fixed-seller", "--grid-count", "0", check_code=0).stdout
    assert text == "gb,p[0],p[],p[1],value,ratio\n"
    rows = list(csv.DictReader(io.StringIO(run("sweep", "--preset", "fixed-seller").stdout)))
    assert len(rows) == 149
    assert all(float(r["ratio"]) >= 1.0 - 1e-12 for r in rows)
    tau = run(
        "sweep", "--gs", "0.8", "--grid-start", "0.2", "--grid-step", "0.1",
        "--grid-count", "2", "--tau", "1,2", check_code=0,
    ).stdout
    assert tau.splitlines()[0] == "gb,value[tau=1],ratio[tau=1],value[tau=2],ratio[tau=2]"


def test_bigdeal_and_truncate():
    deal = run_json("bigdeal", "--gs", "0.5", "--gb", "0.5", "--horizon", "3")
    assert deal["revenue"] == pytest.approx(0.4375)
    tr = run_json("truncate", "--gs", "0.8", "--gb", "0.2", "--tau", "2")
    assert tr["opt_lower"] <= tr["opt_upper"]
    assert tr["value"] == pytest.approx(1.533804, abs=1e-6)
    assert tr["tail_bound"] == pytest.approx(0.5 * 0.64 / 0.2)
