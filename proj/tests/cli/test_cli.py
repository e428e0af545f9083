# Copyright 2026 The tetronsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the tetronsim command-line runner."""

import csv
import json
import os
import subprocess

import pytest

EXE = os.environ.get("TETRONSIM_EXE", "tetronsim")


def run(*args, cwd):
    return subprocess.run([EXE, *args], cwd=cwd, capture_output=True, text=True)


def read_json(path):
    with open(path) as f:
        return json.load(f)


def test_mbqb_exact_assignment_only(tmp_path):
    r = run("run", "mbqb", "--noise", "p_a=0.05", "--exact", "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    res = read_json(tmp_path / "o" / "mbqb.json")
    assert res["err_a"] == pytest.approx(2 * 0.05 * 0.95, abs=1e-12)
    assert res["err_b"] == pytest.approx(0.0, abs=1e-12)
    assert res["mode"] == "exact"
    assert len(res["table"]) == 16
    man = read_json(tmp_path / "o" / "manifest.json")
    assert man["noise"]["p_a"] == 0.05
    assert set(man["outputs"]) == {"mbqb.json", "mbqb_table.csv"}
    assert man["wall_time_s"] >= 0


def test_braid_default_grid_corner(tmp_path):
    r = run("braid", "--class", "S", "--p2", "0.1", "--grid", "default", "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    with open(tmp_path / "o" / "braid_S.csv") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 21 * 21
    assert list(rows[0].keys()) == ["p1", "pa", "p2", "class", "fidelity"]
    # p2 alone still costs fidelity; the noiseless corner of the p2 = 0 scan is 1.
    r0 = run("braid", "--class", "S", "--p2", "0", "--grid", "0,0.1", "--out", "z", cwd=tmp_path)
    assert r0.returncode == 0
    with open(tmp_path / "z" / "braid_S.csv") as f:
        assert float(next(csv.DictReader(f))["fidelity"]) == pytest.approx(1.0, abs=1e-12)


def test_csv_identical_across_worker_counts(tmp_path):
    for w in ("1", "3"):
        r = run("braid", "--class", "HS", "--grid", "linear:0:0.2:6", "--p2", "0.05", "--workers", w, "--out", "w" + w,
                cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        r = run("mbqb", "--noise", "p_a=0.02,p1=0.01", "--shots", "100000", "--seed", "11", "--workers", w,
                "--out", "m" + w, cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        r = run("qed", "--scan", "0.001,0.01", "--pa", "0.01", "--rounds", "2,3,4", "--workers", w, "--out", "q" + w,
                cwd=tmp_path)
        assert r.returncode == 0, r.stderr
    for a, b in (("w1/braid_HS.csv", "w3/braid_HS.csv"), ("m1/mbqb_table.csv", "m3/mbqb_table.csv"),
                 ("q1/qed_scan.csv", "q3/qed_scan.csv"), ("q1/qed_contour.csv", "q3/qed_contour.csv")):
        assert (tmp_path / a).read_bytes() == (tmp_path / b).read_bytes(), a


def test_qed_outputs(tmp_path):
    r = run("qed", "--scan", "0.001,0.01", "--pa", "0.01", "--rounds", "2,3,4", "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    with open(tmp_path / "o" / "qed_scan.csv") as f:
        header = f.readline().strip()
    assert header == "p1,p2,pa,lambda,lambda_x,lambda_z,accept_phys,accept_log"
    with open(tmp_path / "o" / "qed_contour.csv") as f:
        assert f.readline().strip() == "p1,p2"


def test_config_file_and_line_diagnostic(tmp_path):
    (tmp_path / "good.ini").write_text("[run]\nexperiment = tgate\nseed = 4\n\n[tgate]\ndelta = 0.05\n")
    r = run("--config", "good.ini", "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    man = read_json(tmp_path / "o" / "manifest.json")
    assert man["experiment"] == "tgate"
    assert man["config"]["tgate"]["delta"] == "0.05"

    (tmp_path / "bad.ini").write_text("[run]\nseed = 3\n[noise]\np1 = 0.1\np_a = 0.9\n")
    r = run("mbqb", "--config", "bad.ini", "--out", "o", cwd=tmp_path)
    assert r.returncode == 1
    assert "bad.ini:5:" in r.stderr

    (tmp_path / "typo.ini").write_text("[noise]\np1 = 0.1\npq = 2\n")
    r = run("mbqb", "--config", "typo.ini", "--out", "o", cwd=tmp_path)
    assert r.returncode == 1
    assert "typo.ini:3:" in r.stderr


def test_derive_noise_echoed(tmp_path):
    phys = "snr=3.7,delta_over_kT=12,L_over_xi=20,delta_eV=50e-6,tau_elph_s=50e-9,tau_meas_s=1e-6"
    r = run("mbqb", "--physical", phys, "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    man = read_json(tmp_path / "o" / "manifest.json")
    assert man["derivation"] is not None
    assert man["noise"]["p_a"] == pytest.approx(1.1e-4, abs=0.05e-4)
    assert man["noise"]["p1"] == pytest.approx(9.2e-5, abs=0.05e-5)
    r = run("derive-noise", "--physical", "snr=3.7", "--out", "o2", cwd=tmp_path)
    assert r.returncode == 1
    assert "tau_meas_s" in r.stderr


def test_numerical_invariant_exit_code(tmp_path):
    # Far too few steps: some conditioning outcome never occurs.
    r = run("mbqb", "--shots", "5", "--out", "o", cwd=tmp_path)
    assert r.returncode == 2
    assert "zero-probability" in r.stderr
    assert read_json(tmp_path / "o" / "manifest.json")["status"] == 2


def test_check_summary(tmp_path):
    r = run("check", "--out", "o", cwd=tmp_path)
    assert r.returncode == 0, r.stdout
    s = read_json(tmp_path / "o" / "summary.json")
    assert s["passed"] is True
    assert all(c["passed"] for c in s["checks"])
    r = run("tgate", "--delta", "0.1", "--check", "--out", "t", cwd=tmp_path)
    assert r.returncode == 0
    assert (tmp_path / "t" / "summary.json").exists()


def test_bad_flags(tmp_path):
    assert run("mbqb", "--exact", "--shots", "10", cwd=tmp_path).returncode == 1
    assert run("nonsense", cwd=tmp_path).returncode == 1
    assert run("braid", "--class", "T", "--out", "o", cwd=tmp_path).returncode == 1
    assert run("braid", "--grid", "log:0:1:3", "--out", "o", cwd=tmp_path).returncode == 1
