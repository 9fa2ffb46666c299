"""Config parsing, serialization round-trip, scenario outputs, determinism."""

import json
from pathlib import Path

import numpy as np
import pytest

from qlink.cli import (ConfigError, build_device_from_config, main, noise_from_config,
                       parse_config, run_experiment, serialize_config)

MINIMAL = """
[device]
qubit1_ghz = 6.127
qubit2_ghz = 5.712
mode_freqs_ghz = 6.36, 5.83, 5.38
mediator_index = 1

[gate]
g_eff_mhz = 14.2836
"""


def test_parse_minimal_applies_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg["pulse"]["family"] == "cosine"
    assert cfg["run"]["dt_ns"] == 0.005
    assert cfg["gate"]["target"] == "swap"
    assert cfg["device"]["anharm1_mhz"] == -162.0


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigError, match="line 3.*unknown key 'qubit_ghz'"):
        parse_config("\n[device]\nqubit_ghz = 6.1\n")


def test_parse_rejects_unknown_section():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config("[deviceX]\nqubit1_ghz = 6.1\n")


def test_parse_rejects_missing_required():
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("[device]\nqubit1_ghz = 6.1\n")


def test_parse_rejects_negative_t1():
    text = MINIMAL + "\n[noise]\nmode_t1_us = -2.0\n"
    with pytest.raises(ConfigError, match="mode_t1_us"):
        parse_config(text)


def test_parse_names_bad_value_line():
    text = MINIMAL + "\n[run]\nseed = banana\n"
    with pytest.raises(ConfigError, match="bad value for 'seed'"):
        parse_config(text)


def test_length_fsr_consistency_enforced():
    text = """
[device]
qubit1_ghz = 6.127
qubit2_ghz = 5.712
center_mode_ghz = 5.83
fsr_mhz = 403.0
length_cm = 15.0

[gate]
g_eff_mhz = 10.0
"""
    cfg = parse_config(text)
    build_device_from_config(cfg)  # 15 cm <-> 403 MHz consistent
    bad = text.replace("length_cm = 15.0", "length_cm = 60.0")
    with pytest.raises(ConfigError, match="inconsistent"):
        build_device_from_config(parse_config(bad))


def test_serialize_roundtrip_identity():
    cfg = parse_config(MINIMAL + "\n[noise]\npreset = default\n[run]\nseed = 7\n")
    text = serialize_config(cfg)
    assert parse_config(text) == cfg
    assert parse_config(serialize_config(parse_config(text))) == cfg


def test_noise_from_config_preset_and_override():
    cfg = parse_config(MINIMAL + "\n[noise]\npreset = default\nmode_t1_us = 3.0\n")
    ns = noise_from_config(cfg)
    assert ns.mode_t1_us == 3.0
    assert ns.qubit_t1_us is not None
    assert noise_from_config(parse_config(MINIMAL)) is None


def test_dynamics_scenario_outputs(tmp_path):
    cfg = parse_config(MINIMAL + "\n[run]\ndt_ns = 0.02\ntime_points = 11\n")
    out = run_experiment(cfg, "dynamics", tmp_path / "run1")
    csv = (out / "dynamics.csv").read_text()
    lines = csv.strip().split("\n")
    assert lines[0] == "time_ns,pop_q1,pop_q2,pop_m0,pop_m1,pop_m2,leak_total"
    assert len(lines) == 12
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary) == {"gate", "duration_ns", "loss", "leakage", "fidelity",
                            "params", "runtime_s"}
    assert summary["gate"] == "SWAP"
    assert summary["duration_ns"] == pytest.approx(35.0, abs=0.2)
    assert summary["params"]["final_populations"]["Q2"] > 0.99


def test_dynamics_determinism(tmp_path):
    cfg = parse_config(MINIMAL + "\n[run]\ndt_ns = 0.02\ntime_points = 11\n")
    out1 = run_experiment(cfg, "dynamics", tmp_path / "a", seed=3)
    out2 = run_experiment(cfg, "dynamics", tmp_path / "b", seed=3)
    assert (out1 / "dynamics.csv").read_bytes() == (out2 / "dynamics.csv").read_bytes()


def test_error_rate_scenario(tmp_path):
    cfg = parse_config(MINIMAL + """
[noise]
preset = default
[sweep]
n_gates = 4
[run]
dt_ns = 0.02
""")
    out = run_experiment(cfg, "error-rate", tmp_path / "er")
    summary = json.loads((out / "summary.json").read_text())
    p = summary["params"]
    assert p["error_per_gate"] > p["error_dissipation"] > 0
    assert p["error_coherent"] == pytest.approx(
        p["error_per_gate"] - p["error_dissipation"], abs=1e-12)
    lines = (out / "error_rate.csv").read_text().strip().split("\n")
    assert lines[0] == "n_gates,population,population_noise_only"
    assert len(lines) == 5


def test_robustness_scenario(tmp_path):
    cfg = parse_config(MINIMAL + """
[sweep]
delta_max_mhz = 3.0
delta_step_mhz = 3.0
[run]
dt_ns = 0.02
""")
    out = run_experiment(cfg, "robustness", tmp_path / "rb")
    summary = json.loads((out / "summary.json").read_text())
    assert 0 < summary["params"]["r_h"] < summary["params"]["r_d"]
    lines = (out / "robustness.csv").read_text().strip().split("\n")
    assert lines[0] == "delta_mhz,loss_holonomic,loss_dynamic"


def test_fsr_sweep_requires_ladder(tmp_path):
    cfg = parse_config(MINIMAL)
    with pytest.raises(ConfigError, match="ladder"):
        run_experiment(cfg, "fsr-sweep", tmp_path / "x")


def test_unknown_scenario_rejected(tmp_path):
    cfg = parse_config(MINIMAL)
    with pytest.raises(ConfigError, match="unknown scenario"):
        run_experiment(cfg, "frobnicate", tmp_path / "x")


def test_main_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[device]\nbogus_key = 1\n")
    rc = main(["dynamics", "--config", str(bad)])
    assert rc == 2
    err = capsys.readouterr().err
    record = json.loads(err)
    assert record["error"]["type"] == "ConfigError"


def test_main_runs_scenario(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(MINIMAL + "\n[run]\ndt_ns = 0.05\ntime_points = 5\n")
    rc = main(["dynamics", "--config", str(cfgfile), "--out", str(tmp_path / "o")])
    assert rc == 0
    assert (tmp_path / "o" / "summary.json").exists()
    assert (tmp_path / "o" / "config.resolved").exists()


def test_shipped_configs_parse():
    for name in ("swap_dynamics.cfg", "robustness.cfg", "fsr_sweep.cfg",
                 "adam_fsr40.cfg"):
        path = Path(__file__).resolve().parents[1] / "configs" / name
        parse_config(path.read_text())


def test_csv_precision_12_digits(tmp_path):
    cfg = parse_config(MINIMAL + "\n[run]\ndt_ns = 0.05\ntime_points = 3\n")
    out = run_experiment(cfg, "dynamics", tmp_path / "p")
    row = (out / "dynamics.csv").read_text().strip().split("\n")[1]
    first = row.split(",")[1]
    mantissa = first.split("e")[0].replace("-", "").replace(".", "")
    assert len(mantissa) == 12
