"""End-to-end checks of the selftrig CLI binary.

Environment:
  SELFTRIG_BIN         path to the built CLI
  SELFTRIG_CONFIG_DIR  directory with the shipped JSON configs
"""

import json
import os
import pathlib
import subprocess

import pytest

BIN = os.environ["SELFTRIG_BIN"]
CONFIGS = pathlib.Path(os.environ["SELFTRIG_CONFIG_DIR"])


def run_cli(*args, **kwargs):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kwargs)


def test_simulate_writes_all_outputs(tmp_path):
    out = tmp_path / "run"
    r = run_cli("simulate", str(CONFIGS / "unstable3.json"), "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert (out / "trace.csv").exists()
    assert (out / "events.csv").exists()
    assert (out / "summary.json").exists()

    header = (out / "trace.csv").read_text().splitlines()[0]
    assert header == "t,x_1,x_2,x_3,u_1,V,W,event"
    header = (out / "events.csv").read_text().splitlines()[0]
    assert header == "k,t_k,t_predicted,inter_event,W_k,runtime_s"

    summary = json.loads((out / "summary.json").read_text())
    assert summary["event_count"] >= 20
    assert 6.5 <= summary["settling_time_s"] <= 7.0
    assert 0.0 < summary["max_V_over_W"] <= 1.0
    assert len(summary["runtime_ratio"]) == summary["event_count"]
    assert "events" in r.stdout and "wrote" in r.stdout


def test_simulate_quiet_suppresses_stdout(tmp_path):
    r = run_cli("simulate", str(CONFIGS / "scalar.json"), "--out", str(tmp_path / "q"),
                "--quiet")
    assert r.returncode == 0, r.stderr
    assert r.stdout == ""


def test_simulate_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli("simulate", str(CONFIGS / "double_integrator.json"), "--out", str(a),
                   "--quiet").returncode == 0
    assert run_cli("simulate", str(CONFIGS / "double_integrator.json"), "--out", str(b),
                   "--quiet").returncode == 0
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    sa = json.loads((a / "summary.json").read_text())
    sb = json.loads((b / "summary.json").read_text())
    # runtime_ratio holds wall-clock measurements; everything else must match
    sa.pop("runtime_ratio"), sb.pop("runtime_ratio")
    assert sa == sb


def predict_t_next(stdout):
    for line in stdout.splitlines():
        if line.startswith("t_next "):
            return float(line.split()[1])
    raise AssertionError(f"no t_next line in: {stdout!r}")


def test_predict_first_benchmark_event():
    r = run_cli("predict", str(CONFIGS / "unstable3.json"))
    assert r.returncode == 0, r.stderr
    assert abs(predict_t_next(r.stdout) - 0.453) <= 0.01
    assert "forward bracket" in r.stdout


def test_predict_respects_t0_and_state():
    r = run_cli("predict", str(CONFIGS / "scalar.json"), "--t0", "1.5", "--state", "0.7")
    assert r.returncode == 0, r.stderr
    assert "anchor t_k 1.5" in r.stdout
    # the minimizer offset is state-independent: rho = t0 + ln 2
    t = predict_t_next(r.stdout)
    assert t > 1.5 + 0.6931

    r = run_cli("predict", str(CONFIGS / "scalar.json"), "--state", "0")
    assert r.returncode == 0
    assert "equilibrium" in r.stdout

    r = run_cli("predict", str(CONFIGS / "unstable3.json"), "--state", "1,2")
    assert r.returncode == 2
    assert "expected 3 components" in r.stderr


def test_verify_benchmark_passes():
    r = run_cli("verify", str(CONFIGS / "unstable3.json"))
    assert r.returncode == 0, r.stderr
    assert "all checks passed" in r.stdout


def test_scalar_agrees_with_closed_form():
    r = run_cli("scalar", str(CONFIGS / "scalar.json"))
    assert r.returncode == 0, r.stderr
    assert "analytic and numeric minimizers agree" in r.stdout


def test_config_errors_exit_2(tmp_path):
    r = run_cli("simulate", str(tmp_path / "missing.json"))
    assert r.returncode == 2
    assert "config error" in r.stderr

    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    r = run_cli("simulate", str(bad))
    assert r.returncode == 2


def test_unachievable_decay_rate_exits_3(tmp_path):
    cfg = json.loads((CONFIGS / "scalar.json").read_text())
    cfg["certificate"]["alpha"] = 5.0  # cap for this loop is 2|a - bK| = 2
    hot = tmp_path / "hot.json"
    hot.write_text(json.dumps(cfg))
    r = run_cli("simulate", str(hot))
    assert r.returncode == 3
    assert "certificate violation" in r.stderr


def test_crossing_beyond_horizon_exits_4(tmp_path):
    # open loop already far more stable than the threshold decay: V sinks at
    # rate 10 while W stays near W0 across the whole probing horizon, so the
    # gap never closes and the forward probe exhausts its horizon
    cfg = {
        "system": {"A": [[-5.0]], "B": [[1.0]], "x0": [1.0]},
        "feedback": {"K": [[0.0]]},
        "certificate": {"alpha": 0.001, "w0_multiplier": 1.3, "P": [[1.0]]},
    }
    path = tmp_path / "nocross.json"
    path.write_text(json.dumps(cfg))
    r = run_cli("predict", str(path))
    assert r.returncode == 4
    assert "predictor failure" in r.stderr


def test_invalid_scalar_gain_exits_5(tmp_path):
    cfg = {
        "system": {"A": [[-1.0]], "B": [[1.0]], "x0": [1.0]},
        "feedback": {"K": [[-0.5]]},
        "certificate": {"alpha": 0.4, "w0_multiplier": 1.3, "P": [[1.0]]},
        "scalar": {"c": 1.0, "q": 0.4},
    }
    path = tmp_path / "weak.json"
    path.write_text(json.dumps(cfg))
    r = run_cli("scalar", str(path))
    assert r.returncode == 5
    assert "verification mismatch" in r.stderr


def test_usage_and_help():
    r = run_cli()
    assert r.returncode == 2

    r = run_cli("--help")
    assert r.returncode == 0
    assert "simulate" in r.stdout and "predict" in r.stdout
