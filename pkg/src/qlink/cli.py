"""Experiment runner: sectioned config files, scenario execution, CSV/JSON output.

Scenarios: dynamics, error-rate, robustness, fsr-sweep, leakage-distribution,
optimize-frequencies, optimize-waveform. One scenario per invocation; outputs
are one CSV per curve plus a JSON summary, numerically reproducible for a
fixed config and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import numpy as np

from . import analysis, device as dev, holonomic, optimize
from .device import DEFAULT_NOISE, DeviceSpec, NoiseSpec
from .holonomic import GateTarget

SCENARIOS = ("dynamics", "error-rate", "robustness", "fsr-sweep",
             "leakage-distribution", "optimize-frequencies", "optimize-waveform")

_REQUIRED = object()


class ConfigError(ValueError):
    """Malformed experiment configuration."""


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


# section -> key -> (parser, default); _REQUIRED keys must be present
SCHEMA: dict[str, dict[str, tuple[Any, Any]]] = {
    "device": {
        "qubit1_ghz": (float, 6.127),
        "qubit2_ghz": (float, 5.712),
        "anharm1_mhz": (float, -162.0),
        "anharm2_mhz": (float, -162.0),
        "mode_freqs_ghz": (_float_list, None),
        "mediator_index": (int, None),
        "center_mode_ghz": (float, None),
        "fsr_mhz": (float, None),
        "n_modes": (int, 5),
        "g1_mhz": (float, 30.26),
        "g2_mhz": (float, 26.88),
        "length_cm": (float, None),
        "qubit_levels": (int, 3),
    },
    "pulse": {
        "family": (str, "cosine"),
        "n_knots": (int, 16),
    },
    "gate": {
        "target": (str, "swap"),
        "theta_rad": (float, None),
        "phi_rad": (float, None),
        "g_eff_mhz": (float, _REQUIRED),
    },
    "noise": {
        "preset": (str, None),
        "qubit1_t1_us": (float, None),
        "qubit2_t1_us": (float, None),
        "qubit1_tphi_us": (float, None),
        "qubit2_tphi_us": (float, None),
        "mode_t1_us": (float, None),
    },
    "sweep": {
        "delta_max_mhz": (float, 5.0),
        "delta_step_mhz": (float, 0.5),
        "fsr_min_mhz": (float, 35.0),
        "fsr_max_mhz": (float, 500.0),
        "fsr_points": (int, 13),
        "n_gates": (int, 12),
    },
    "optimizer": {
        "learning_rate": (float, 0.03),
        "beta1": (float, 0.9),
        "beta2": (float, 0.999),
        "epsilon_stab": (float, 1e-8),
        "max_iterations": (int, 250),
        "tolerance": (float, 0.0),
        "fd_step": (float, 1e-3),
        "coarse_step_mhz": (float, None),
        "refine_step_mhz": (float, 0.025),
        "guard_mhz": (float, 3.0),
        "rotation_tolerance": (float, 0.01),
        "n_basins": (int, 4),
        "search_dt_ns": (float, 0.02),
        "final_dt_ns": (float, 0.002),
    },
    "output": {
        "directory": (str, "out"),
        "formats": (str, "csv,json"),
    },
    "run": {
        "seed": (int, 0),
        "workers": (int, 1),
        "dt_ns": (float, 0.005),
        "model": (str, "bessel"),
        "time_points": (int, 201),
    },
}

REQUIRED_SECTIONS = ("device", "gate")


def parse_config(text: str) -> dict[str, dict[str, Any]]:
    """Parse the sectioned key = value format; unknown keys are rejected."""
    values: dict[str, dict[str, Any]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            values.setdefault(section, {})
            continue
        if section is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key '{key}' in [{section}]")
        parser, _ = SCHEMA[section][key]
        try:
            values[section][key] = parser(val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"line {lineno}: bad value for '{key}': {exc}") from exc

    for sec in REQUIRED_SECTIONS:
        if sec not in values:
            raise ConfigError(f"missing required section [{sec}]")
    config: dict[str, dict[str, Any]] = {}
    for sec, keys in SCHEMA.items():
        config[sec] = {}
        got = values.get(sec, {})
        for key, (_, default) in keys.items():
            if key in got:
                config[sec][key] = got[key]
            elif default is _REQUIRED:
                raise ConfigError(f"missing required key '{key}' in [{sec}]")
            else:
                config[sec][key] = default
    _validate(config)
    return config


def _validate(config: dict[str, dict[str, Any]]) -> None:
    d = config["device"]
    if d["mode_freqs_ghz"] is not None and (
            d["center_mode_ghz"] is not None or d["fsr_mhz"] is not None):
        raise ConfigError("device: mode_freqs_ghz conflicts with the FSR ladder keys")
    if d["length_cm"] is not None and d["length_cm"] <= 0:
        raise ConfigError("device: length_cm must be positive")
    n = config["noise"]
    for key in ("qubit1_t1_us", "qubit2_t1_us", "qubit1_tphi_us", "qubit2_tphi_us",
                "mode_t1_us"):
        if n[key] is not None and n[key] <= 0:
            raise ConfigError(f"noise: {key} must be positive")
    if n["preset"] is not None and n["preset"] != "default":
        raise ConfigError(f"noise: unknown preset '{n['preset']}'")
    if config["run"]["model"] not in ("bessel", "bessel1", "exact", "lab"):
        raise ConfigError(f"run: unknown model '{config['run']['model']}'")
    if config["pulse"]["family"] not in ("square", "gaussian", "cosine", "parameterized"):
        raise ConfigError(f"pulse: unknown family '{config['pulse']['family']}'")
    if config["gate"]["target"] not in ("swap", "sqrt_swap", "custom"):
        raise ConfigError(f"gate: unknown target '{config['gate']['target']}'")
    if config["gate"]["target"] == "custom" and (
            config["gate"]["theta_rad"] is None or config["gate"]["phi_rad"] is None):
        raise ConfigError("gate: custom target needs theta_rad and phi_rad")


def serialize_config(config: dict[str, dict[str, Any]]) -> str:
    """Canonical text form; parse(serialize(parse(x))) == parse(x)."""
    lines = []
    for sec, keys in SCHEMA.items():
        body = []
        for key in keys:
            val = config[sec][key]
            if val is None:
                continue
            if isinstance(val, tuple):
                body.append(f"{key} = {', '.join(repr(v) for v in val)}")
            else:
                body.append(f"{key} = {val!r}" if isinstance(val, str) else f"{key} = {val}")
        if body:
            lines.append(f"[{sec}]")
            lines.extend(body)
            lines.append("")
    return "\n".join(lines).replace("'", "") + "\n"


def build_device_from_config(config: dict[str, dict[str, Any]]) -> DeviceSpec:
    d = config["device"]
    kwargs: dict[str, Any] = dict(
        g_qubit_mhz=(d["g1_mhz"], d["g2_mhz"]),
        qubit_levels=d["qubit_levels"],
    )
    if d["length_cm"] is not None:
        kwargs["cable_length_m"] = d["length_cm"] / 100.0
    if d["mode_freqs_ghz"] is not None:
        kwargs["mode_freq_ghz"] = d["mode_freqs_ghz"]
        kwargs["mediator_index"] = d["mediator_index"]
    else:
        center = d["center_mode_ghz"] if d["center_mode_ghz"] is not None else 5.83
        fsr = d["fsr_mhz"]
        if fsr is None and d["length_cm"] is not None:
            fsr = dev.fsr_length_convert(length_m=d["length_cm"] / 100.0)
            kwargs.pop("cable_length_m")  # avoid double-specification check
        if fsr is None:
            fsr = 403.0
        kwargs["center_mode_ghz"] = center
        kwargs["fsr_mhz"] = fsr
        kwargs["n_modes"] = d["n_modes"]
    try:
        return dev.build_device((d["qubit1_ghz"], d["qubit2_ghz"]),
                                (d["anharm1_mhz"], d["anharm2_mhz"]), **kwargs)
    except dev.DeviceError as exc:
        raise ConfigError(f"device: {exc}") from exc


def noise_from_config(config: dict[str, dict[str, Any]]) -> NoiseSpec | None:
    n = config["noise"]
    explicit = any(n[k] is not None for k in
                   ("qubit1_t1_us", "qubit2_t1_us", "qubit1_tphi_us",
                    "qubit2_tphi_us", "mode_t1_us"))
    if n["preset"] is None and not explicit:
        return None
    base = DEFAULT_NOISE if n["preset"] == "default" else NoiseSpec()
    q_t1 = list(base.qubit_t1_us or (0.0, 0.0))
    q_tphi = list(base.qubit_tphi_us or (0.0, 0.0))
    mode_t1 = base.mode_t1_us
    if n["qubit1_t1_us"] is not None:
        q_t1[0] = n["qubit1_t1_us"]
    if n["qubit2_t1_us"] is not None:
        q_t1[1] = n["qubit2_t1_us"]
    if n["qubit1_tphi_us"] is not None:
        q_tphi[0] = n["qubit1_tphi_us"]
    if n["qubit2_tphi_us"] is not None:
        q_tphi[1] = n["qubit2_tphi_us"]
    if n["mode_t1_us"] is not None:
        mode_t1 = n["mode_t1_us"]
    return NoiseSpec(
        qubit_t1_us=tuple(q_t1) if any(q_t1) else None,
        qubit_tphi_us=tuple(q_tphi) if any(q_tphi) else None,
        mode_t1_us=mode_t1)


def gate_from_config(config: dict[str, dict[str, Any]]) -> GateTarget:
    g = config["gate"]
    if g["target"] == "swap":
        return holonomic.swap_target()
    if g["target"] == "sqrt_swap":
        return holonomic.sqrt_swap_target()
    return GateTarget(g["theta_rad"], g["phi_rad"], "CUSTOM")


def grid_config(config: dict[str, dict[str, Any]]) -> optimize.GridConfig:
    o = config["optimizer"]
    return optimize.GridConfig(
        coarse_step_mhz=o["coarse_step_mhz"], refine_step_mhz=o["refine_step_mhz"],
        guard_mhz=o["guard_mhz"], rotation_tolerance=o["rotation_tolerance"],
        n_basins=o["n_basins"], search_dt_ns=o["search_dt_ns"],
        final_dt_ns=o["final_dt_ns"])


def adam_config(config: dict[str, dict[str, Any]]) -> optimize.AdamConfig:
    o = config["optimizer"]
    return optimize.AdamConfig(
        learning_rate=o["learning_rate"], beta1=o["beta1"], beta2=o["beta2"],
        epsilon=o["epsilon_stab"], max_iterations=o["max_iterations"],
        tolerance=o["tolerance"], fd_step=o["fd_step"])


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.11e}"  # 12 significant digits


def write_csv(path: Path, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(x)) for x in row) + "\n")


def write_summary(path: Path, *, gate: str, duration_ns: float | None,
                  loss: float | None, leakage: float | None, fidelity: float | None,
                  params: dict[str, Any], runtime_s: float) -> None:
    record = {
        "gate": gate,
        "duration_ns": duration_ns,
        "loss": loss,
        "leakage": leakage,
        "fidelity": fidelity,
        "params": params,
        "runtime_s": round(runtime_s, 3),
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def _synth(config, device):
    target = gate_from_config(config)
    return holonomic.synthesize_drives(device, target, config["pulse"]["family"],
                                       config["gate"]["g_eff_mhz"])


def run_dynamics(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    schedule = _synth(config, device)
    noise = noise_from_config(config)
    res = holonomic.simulate_schedule(
        device, schedule, model=config["run"]["model"], noise=noise,
        dt=config["run"]["dt_ns"], n_time_points=config["run"]["time_points"])
    i_q1, i_q2 = res.labels.index("Q1"), res.labels.index("Q2")
    mode_cols = [k for k, l in enumerate(res.labels) if l.startswith("M")]
    header = (["time_ns", "pop_q1", "pop_q2"]
              + [f"pop_{res.labels[k].lower()}" for k in mode_cols] + ["leak_total"])
    rows = []
    for r, t in enumerate(res.times):
        p = res.populations[r]
        rows.append([t, p[i_q1], p[i_q2], *p[mode_cols], p[mode_cols].sum()])
    write_csv(out / "dynamics.csv", header, rows)
    sub, disc = analysis.subspace_state(
        res.final_state if res.basis != "sector01" else res.final_state[1:3, 1:3] /
        max(np.trace(res.final_state[1:3, 1:3]).real, 1e-300))
    v = holonomic.target_unitary(schedule.target.theta, schedule.target.phi)
    ideal = v @ np.array([1.0, 0.0], dtype=complex)
    fid = analysis.state_fidelity(sub, np.outer(ideal, ideal.conj()))
    return dict(gate=schedule.target.label, duration_ns=schedule.t_ns,
                loss=1.0 - res.population("Q2") if schedule.target.label == "SWAP" else None,
                leakage=res.leakage, fidelity=fid,
                params={"averages_mhz": list(schedule.averages_mhz),
                        "model": config["run"]["model"],
                        "final_populations": {l: float(p) for l, p in
                                              zip(res.labels, res.final_populations)}})


def run_error_rate(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    schedule = _synth(config, device)
    noise = noise_from_config(config)
    n_max = config["sweep"]["n_gates"]
    eps_coh, total, dissipation = analysis.decoherence_compensated_error(
        device, schedule, n_max, noise, dt=config["run"]["dt_ns"])
    rows = [[n, p, pd] for n, p, pd in
            zip(total.n_gates, total.populations, dissipation.populations)]
    write_csv(out / "error_rate.csv", ["n_gates", "population", "population_noise_only"],
              rows)
    return dict(gate=schedule.target.label, duration_ns=schedule.t_ns,
                loss=total.error_per_gate, leakage=None, fidelity=None,
                params={"error_per_gate": total.error_per_gate,
                        "error_dissipation": dissipation.error_per_gate,
                        "error_coherent": eps_coh,
                        "intercept": total.intercept,
                        "n_gates_max": n_max})


def run_robustness(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    target = gate_from_config(config)
    family = config["pulse"]["family"]
    g_eff = config["gate"]["g_eff_mhz"]
    delta0 = holonomic.calibrate_deltas(device, target, family, g_eff)
    schedule = holonomic.synthesize_drives(device, target, family, g_eff,
                                           deltas_mhz=(delta0, delta0))
    legs = holonomic.dynamic_baseline_schedule(device, family, g_eff)
    noise = noise_from_config(config)
    s = config["sweep"]
    grid = np.arange(-s["delta_max_mhz"], s["delta_max_mhz"] + s["delta_step_mhz"] / 2,
                     s["delta_step_mhz"])
    curve = analysis.robustness_sweep(device, schedule, legs, grid, noise,
                                      dt=config["run"]["dt_ns"])
    rows = [[d, lh, ld] for d, lh, ld in
            zip(curve.delta_mhz, curve.loss_holonomic, curve.loss_dynamic)]
    write_csv(out / "robustness.csv", ["delta_mhz", "loss_holonomic", "loss_dynamic"], rows)
    return dict(gate=schedule.target.label, duration_ns=schedule.t_ns,
                loss=curve.r_h, leakage=None, fidelity=None,
                params={"r_h": curve.r_h, "r_d": curve.r_d, "r_r": curve.r_r,
                        "reference_delta_mhz": curve.reference_delta_mhz,
                        "calibrated_delta_mhz": delta0,
                        "noise": "none" if noise is None else "configured"})


def _fsr_point(args) -> tuple[float, float, float, float, float]:
    config, fsr = args
    d = dict(config["device"])
    base = build_device_from_config(config)
    ladder = dev.build_device(base.qubit_freq_ghz, base.anharm_mhz,
                              center_mode_ghz=5.83 if d["center_mode_ghz"] is None
                              else d["center_mode_ghz"],
                              fsr_mhz=fsr, n_modes=d["n_modes"],
                              g_qubit_mhz=(d["g1_mhz"], d["g2_mhz"]))
    res = optimize.optimize_frequencies(ladder, config["pulse"]["family"],
                                        config["gate"]["g_eff_mhz"],
                                        gate_from_config(config), grid_config(config))
    length_cm = 100.0 * dev.fsr_length_convert(fsr_mhz=fsr)
    return fsr, length_cm, res.wq1_ghz, res.wq2_ghz, res.leakage


def run_fsr_sweep(config, out: Path, workers: int) -> dict:
    s = config["sweep"]
    fsrs = np.geomspace(s["fsr_min_mhz"], s["fsr_max_mhz"], s["fsr_points"])
    args = [(config, float(f)) for f in fsrs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_fsr_point, args))
    else:
        rows = [_fsr_point(a) for a in args]
    write_csv(out / "fsr_sweep.csv",
              ["fsr_mhz", "length_cm", "wq1_ghz", "wq2_ghz", "leakage"],
              [list(r) for r in rows])
    leaks = {r[0]: r[4] for r in rows}
    return dict(gate=gate_from_config(config).label, duration_ns=None, loss=None,
                leakage=rows[0][4], fidelity=None,
                params={"family": config["pulse"]["family"],
                        "fsr_grid_mhz": [r[0] for r in rows],
                        "leakage_by_fsr": {f"{k:.3f}": v for k, v in leaks.items()}})


def run_optimize_frequencies(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    res = optimize.optimize_frequencies(device, config["pulse"]["family"],
                                        config["gate"]["g_eff_mhz"],
                                        gate_from_config(config), grid_config(config))
    write_csv(out / "frequency_search.csv",
              ["stage_step_mhz", "wq1_mhz", "wq2_mhz", "leakage"],
              [list(st) for st in res.stages])
    return dict(gate=gate_from_config(config).label, duration_ns=None,
                loss=None, leakage=res.leakage, fidelity=None,
                params={"wq1_ghz": res.wq1_ghz, "wq2_ghz": res.wq2_ghz,
                        "target_population": res.target_population,
                        "evaluations": res.evaluations})


def run_optimize_waveform(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    target = gate_from_config(config)
    g_eff = config["gate"]["g_eff_mhz"]
    freq = optimize.optimize_frequencies(device, "cosine", g_eff, target,
                                         grid_config(config))
    tuned = device.with_qubit_freqs(freq.wq1_ghz, freq.wq2_ghz)
    res = optimize.optimize_waveform(tuned, target, g_eff, adam_config(config),
                                     n_knots=config["pulse"]["n_knots"],
                                     search_dt_ns=config["optimizer"]["search_dt_ns"],
                                     final_dt_ns=config["optimizer"]["final_dt_ns"])
    write_csv(out / "adam_loss.csv", ["iteration", "loss"],
              [[k, l] for k, l in enumerate(res.result.history)])
    return dict(gate=target.label, duration_ns=res.duration_ns,
                loss=res.optimized_loss, leakage=res.optimized_leakage, fidelity=None,
                params={"baseline_loss": res.baseline_loss,
                        "baseline_leakage": res.baseline_leakage,
                        "improvement": (res.baseline_leakage /
                                        max(res.optimized_leakage, 1e-300)),
                        "knots": list(res.knots),
                        "iterations": res.result.iterations,
                        "wq1_ghz": tuned.qubit_freq_ghz[0],
                        "wq2_ghz": tuned.qubit_freq_ghz[1]})


def run_leakage_distribution(config, out: Path, workers: int) -> dict:
    device = build_device_from_config(config)
    target = gate_from_config(config)
    g_eff = config["gate"]["g_eff_mhz"]
    freq = optimize.optimize_frequencies(device, "cosine", g_eff, target,
                                         grid_config(config))
    tuned = device.with_qubit_freqs(freq.wq1_ghz, freq.wq2_ghz)
    res = optimize.optimize_waveform(tuned, target, g_eff, adam_config(config),
                                     n_knots=config["pulse"]["n_knots"],
                                     search_dt_ns=config["optimizer"]["search_dt_ns"],
                                     final_dt_ns=config["optimizer"]["final_dt_ns"])
    rows = [[j, res.baseline_mode_populations[j], res.optimized_mode_populations[j]]
            for j in range(device.n_modes)]
    write_csv(out / "leakage_distribution.csv",
              ["mode_index", "pop_cosine", "pop_optimized"], rows)
    return dict(gate=target.label, duration_ns=res.duration_ns,
                loss=res.optimized_loss, leakage=res.optimized_leakage, fidelity=None,
                params={"baseline_leakage": res.baseline_leakage,
                        "fsr_mhz": device.fsr_mhz,
                        "pop_cosine": [float(x) for x in res.baseline_mode_populations],
                        "pop_optimized": [float(x) for x in res.optimized_mode_populations]})


RUNNERS = {
    "dynamics": run_dynamics,
    "error-rate": run_error_rate,
    "robustness": run_robustness,
    "fsr-sweep": run_fsr_sweep,
    "optimize-frequencies": run_optimize_frequencies,
    "optimize-waveform": run_optimize_waveform,
    "leakage-distribution": run_leakage_distribution,
}


def run_experiment(config: dict[str, dict[str, Any]], scenario: str,
                   out_dir: str | Path | None = None, seed: int | None = None,
                   workers: int | None = None) -> Path:
    """Execute one scenario; returns the output directory."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario '{scenario}'; choose from {SCENARIOS}")
    if scenario == "fsr-sweep" and config["device"]["mode_freqs_ghz"] is not None:
        raise ConfigError("fsr-sweep requires the FSR-ladder device form")
    out = Path(out_dir if out_dir is not None else config["output"]["directory"])
    out.mkdir(parents=True, exist_ok=True)
    eff_seed = seed if seed is not None else config["run"]["seed"]
    np.random.seed(eff_seed & 0xFFFFFFFF)
    eff_workers = workers if workers is not None else config["run"]["workers"]
    t0 = time.perf_counter()
    summary = RUNNERS[scenario](config, out, eff_workers)
    summary["params"]["seed"] = eff_seed
    summary["params"]["scenario"] = scenario
    write_summary(out / "summary.json", runtime_s=time.perf_counter() - t0, **summary)
    with open(out / "config.resolved", "w", newline="\n") as fh:
        fh.write(serialize_config(config))
    return out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="qlink",
                                 description="Remote holonomic two-qubit gate simulator")
    ap.add_argument("scenario", choices=SCENARIOS)
    ap.add_argument("--config", required=True, help="experiment config file")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args(argv)
    try:
        config = parse_config(Path(args.config).read_text())
        out = run_experiment(config, args.scenario, args.out, args.seed, args.workers)
    except Exception as exc:  # noqa: BLE001 - single reporting point
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
