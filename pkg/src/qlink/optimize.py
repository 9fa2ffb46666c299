"""Adam optimizer, finite-difference gradients, and the leakage searches.

optimize_frequencies: coarse-to-fine grid search of the two qubit frequencies
minimizing end-of-gate cable leakage in the rotating-frame model.
optimize_waveform: Adam descent on interpolated knot amplitudes against the
trace gate loss, with the cyclic-condition renormalization re-applied after
every update. optimize_lab_frequencies: transfer-maximizing calibration of
the lab-frame model (dressed readout).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import j1

from . import holonomic, pulse
from .device import MHZ, GHZ, DeviceSpec
from .holonomic import GateTarget, SynthesisError

_U = np.linspace(0.0, 1.0, 4001)


class OptimizeError(RuntimeError):
    """Optimization failed or diverged."""


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_iterations: int = 5000
    tolerance: float = 0.0          # stop when |loss change| < tolerance
    fd_step: float = 1e-4

    def __post_init__(self):
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise OptimizeError("beta parameters must lie in (0, 1)")
        if self.learning_rate <= 0:
            raise OptimizeError("learning rate must be positive")


@dataclass
class OptimizationResult:
    best_params: np.ndarray
    best_loss: float
    history: list[float]
    iterations: int
    converged: bool


def finite_difference_gradient(f: Callable[[np.ndarray], float], x: np.ndarray,
                               h: float = 1e-4) -> np.ndarray:
    """Central differences per coordinate; O(h^2) error."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        fp, fm = f(xp), f(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise OptimizeError(f"non-finite loss at coordinate {i}")
        g[i] = (fp - fm) / (2.0 * h)
    return g


def adam_minimize(f: Callable[[np.ndarray], float], x0: Sequence[float],
                  config: AdamConfig = AdamConfig(),
                  gradient: Callable[[np.ndarray], np.ndarray] | None = None,
                  project: Callable[[np.ndarray], np.ndarray] | None = None
                  ) -> OptimizationResult:
    """Standard Adam with bias-corrected moments; deterministic."""
    x = np.asarray(x0, dtype=float).copy()
    loss0 = float(f(x))
    if not np.isfinite(loss0):
        raise OptimizeError("non-finite loss at the initial point")
    grad = gradient if gradient is not None else (
        lambda z: finite_difference_gradient(f, z, config.fd_step))
    m = np.zeros_like(x)
    v = np.zeros_like(x)
    history = [loss0]
    best_x, best_loss = x.copy(), loss0
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        g = grad(x)
        m = config.beta1 * m + (1 - config.beta1) * g
        v = config.beta2 * v + (1 - config.beta2) * g * g
        m_hat = m / (1 - config.beta1**it)
        v_hat = v / (1 - config.beta2**it)
        x = x - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
        if project is not None:
            x = project(x)
        loss = float(f(x))
        if not np.isfinite(loss) or loss > 1e6 * max(abs(loss0), 1e-12):
            raise OptimizeError(f"Adam diverged at iteration {it} (loss {loss:.3e})")
        history.append(loss)
        if loss < best_loss:
            best_loss, best_x = loss, x.copy()
        if config.tolerance > 0 and abs(history[-1] - history[-2]) < config.tolerance:
            converged = True
            break
    return OptimizationResult(best_params=best_x, best_loss=best_loss,
                              history=history, iterations=it, converged=converged)


# ---------------------------------------------------------------------------
# frequency grid search (rotating-frame model)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridConfig:
    coarse_step_mhz: float | None = None   # default: FSR / 50
    refine_step_mhz: float = 0.025
    guard_mhz: float = 3.0
    rotation_tolerance: float = 0.01
    n_basins: int = 4
    search_dt_ns: float = 0.02
    final_dt_ns: float = 0.002


@dataclass
class FreqOptResult:
    wq1_ghz: float
    wq2_ghz: float
    leakage: float
    target_population: float
    evaluations: int
    stages: list[tuple[float, float, float, float]]  # (step, wq1, wq2, leakage)


def _resample_half_grid(x_tables: Sequence[np.ndarray], t_ns: float,
                        dt: float) -> tuple[np.ndarray, int]:
    n = max(int(round(t_ns / dt)), 1)
    th = np.arange(2 * n + 1) / (2 * n)
    out = np.stack([np.interp(th, _U, x) for x in x_tables])
    return out, n


def _orbit_population(psi: np.ndarray, target: GateTarget | None) -> np.ndarray:
    """|<V 10 | psi>|^2 on the qubit pair, batched."""
    if target is None:
        ideal = np.array([0.0, 1.0], dtype=complex)
    else:
        ideal = holonomic.target_unitary(target.theta, target.phi) @ np.array([1.0, 0.0])
    return np.abs(psi[..., :2] @ ideal.conj()) ** 2


def _leak_eval(device: DeviceSpec, target: GateTarget, x_tab: Sequence[np.ndarray],
               t_ns: float, phi: tuple[float, float], wq1: np.ndarray,
               wq2: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    x_tables, _ = _resample_half_grid(x_tab, t_ns, dt)
    wm2 = 1e3 * device.mediator_freq_ghz
    d_drive = np.stack([wm2 - wq1, wm2 - wq2], axis=1)
    psi = holonomic.propagate_bessel_batch(
        np.asarray(device.g_mhz), device.mode_offsets_mhz(), d_drive, phi,
        x_tables, t_ns, dt)
    leak = np.sum(np.abs(psi[:, 2:]) ** 2, axis=1)
    pop = _orbit_population(psi, target)
    return leak, pop


def optimize_frequencies(device: DeviceSpec, family: str, g_eff_mhz: float,
                         target: GateTarget | None = None,
                         config: GridConfig = GridConfig()) -> FreqOptResult:
    """Minimize end-of-gate cable leakage over the qubit-frequency rectangle.

    The search window is [w_M2, w_M2 + FSR] x [w_M2 - FSR, w_M2] (minus a
    guard margin); a coarse joint grid seeds a few separated basins that are
    refined down to the 0.025 MHz resolution. Points whose rotation error
    1 - P_target - leak exceeds the tolerance are masked infeasible, so the
    optimizer cannot trade the gate away for leakage.
    """
    if device.fsr_mhz is None:
        raise OptimizeError("frequency search needs an FSR-ladder device")
    if target is None:
        target = holonomic.swap_target()
    fsr = device.fsr_mhz
    wm2 = 1e3 * device.mediator_freq_ghz
    med = device.mediator_index
    g_med = (abs(device.g_mhz[0][med]), abs(device.g_mhz[1][med]))
    shape = pulse.unit_shape(family, _U)
    x_tab, t_ns, _ = holonomic.solve_x_tables(
        g_med, holonomic.gate_targets_mhz(target, g_eff_mhz), shape)
    phi = holonomic._drive_phases(device, target)

    step = config.coarse_step_mhz if config.coarse_step_mhz else max(fsr / 50.0, 0.5)
    guard = config.guard_mhz
    lo1, hi1 = wm2 + guard, wm2 + fsr - guard
    lo2, hi2 = wm2 - fsr + guard, wm2 - guard
    if lo1 >= hi1 or lo2 >= hi2:
        raise OptimizeError("empty search window (guard too large for this FSR)")

    g1 = np.arange(lo1, hi1 + 1e-9, step)
    g2 = np.arange(lo2, hi2 + 1e-9, step)
    w1, w2 = np.meshgrid(g1, g2, indexing="ij")
    leak, pop = _leak_eval(device, target, x_tab, t_ns, phi, w1.ravel(), w2.ravel(),
                           config.search_dt_ns)
    rot = np.maximum(1.0 - pop - leak, 0.0)
    obj = np.where(rot <= config.rotation_tolerance, leak, np.inf)
    if not np.isfinite(obj).any():
        raise OptimizeError("no feasible grid point (rotation tolerance too tight)")
    evaluations = leak.size
    order = np.argsort(obj)
    seeds: list[tuple[float, float]] = []
    for idx in order:
        if not np.isfinite(obj[idx]):
            break
        p = (float(w1.ravel()[idx]), float(w2.ravel()[idx]))
        if all(abs(p[0] - s[0]) + abs(p[1] - s[1]) > 4 * step for s in seeds):
            seeds.append(p)
        if len(seeds) >= config.n_basins:
            break
    stages = [(step, seeds[0][0], seeds[0][1], float(obj[order[0]]))]

    refine_steps = []
    st = step
    while st > config.refine_step_mhz:
        refine_steps.append((max(st / 8.0, config.refine_step_mhz), st))
        st /= 8.0
    best = (np.inf, seeds[0][0], seeds[0][1], 0.0)
    for b1, b2 in seeds:
        for st, half in refine_steps:
            gg1 = np.unique(np.clip(b1 + np.arange(-half, half + st / 2, st), lo1, hi1))
            gg2 = np.unique(np.clip(b2 + np.arange(-half, half + st / 2, st), lo2, hi2))
            w1, w2 = np.meshgrid(gg1, gg2, indexing="ij")
            leak, pop = _leak_eval(device, target, x_tab, t_ns, phi, w1.ravel(), w2.ravel(),
                                   config.search_dt_ns / 2)
            rot = np.maximum(1.0 - pop - leak, 0.0)
            obj = np.where(rot <= config.rotation_tolerance, leak, np.inf)
            evaluations += leak.size
            k = int(np.argmin(obj))
            if np.isfinite(obj[k]):
                b1, b2 = float(w1.ravel()[k]), float(w2.ravel()[k])
        leak_f, pop_f = _leak_eval(device, target, x_tab, t_ns, phi,
                                   np.array([b1]), np.array([b2]), config.final_dt_ns)
        evaluations += 1
        stages.append((refine_steps[-1][0] if refine_steps else step, b1, b2,
                       float(leak_f[0])))
        if leak_f[0] < best[0]:
            best = (float(leak_f[0]), b1, b2, float(pop_f[0]))
    return FreqOptResult(wq1_ghz=best[1] * 1e-3, wq2_ghz=best[2] * 1e-3,
                         leakage=best[0], target_population=best[3],
                         evaluations=evaluations, stages=stages)


# ---------------------------------------------------------------------------
# waveform optimization (Adam over knot amplitudes)
# ---------------------------------------------------------------------------

@dataclass
class WaveformResult:
    result: OptimizationResult
    knots: tuple[float, ...]
    deltas_mhz: tuple[float, float]
    baseline_loss: float
    baseline_leakage: float
    optimized_loss: float
    optimized_leakage: float
    baseline_mode_populations: np.ndarray
    optimized_mode_populations: np.ndarray
    duration_ns: float


def _knot_batch_tables(knot_sets: np.ndarray, g_med: tuple[float, float],
                       targets: tuple[float, float], dt: float
                       ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solve synthesis per knot vector; returns (x_tables (N,2,nt), t_ns (N,), ok)."""
    n_set = knot_sets.shape[0]
    durations = np.zeros(n_set)
    tabs = []
    ok = np.ones(n_set, dtype=bool)
    for k in range(n_set):
        knots = np.concatenate([[0.0], np.maximum(knot_sets[k], 0.0), [0.0]])
        shape = pulse.unit_shape("parameterized", _U, knots=knots)
        try:
            x_tab, t_ns, _ = holonomic.solve_x_tables(g_med, targets, shape)
        except SynthesisError:
            ok[k] = False
            tabs.append(np.zeros((2, _U.size)))
            durations[k] = 1.0
            continue
        tabs.append(np.stack(x_tab))
        durations[k] = t_ns
    n = max(int(round(float(durations[ok].max() if ok.any() else 1.0) / dt)), 1)
    th = np.arange(2 * n + 1) / (2 * n)
    out = np.zeros((n_set, 2, th.size))
    for k in range(n_set):
        for i in range(2):
            out[k, i] = np.interp(th, _U, tabs[k][i])
    return out, durations, ok


def _waveform_losses(device: DeviceSpec, target: GateTarget, param_sets: np.ndarray,
                     g_med: tuple[float, float], targets: tuple[float, float],
                     phi: tuple[float, float], dt: float
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Trace loss, |10>-leakage and per-mode populations for parameter vectors
    [interior knots..., delta1_mhz, delta2_mhz]."""
    knot_sets = param_sets[:, :-2]
    deltas = param_sets[:, -2:]
    x_tabs, t_arr, ok = _knot_batch_tables(knot_sets, g_med, targets, dt)
    wm2 = 1e3 * device.mediator_freq_ghz
    d_drive = np.tile([[wm2 - 1e3 * device.qubit_freq_ghz[0],
                        wm2 - 1e3 * device.qubit_freq_ghz[1]]], (knot_sets.shape[0], 1))
    psi = holonomic.propagate_bessel_batch(
        np.asarray(device.g_mhz), device.mode_offsets_mhz(), d_drive, phi,
        x_tabs, t_arr, dt, n_columns=2, delta_mhz=deltas)
    v = holonomic.target_unitary(target.theta, target.phi)
    # U[j, c] = psi[n, c, j]: tr(V^dag U) = sum_jc conj(V_jc) psi[n, c, j]
    tr = np.abs(np.einsum("jc,ncj->n", v.conj(), psi[:, :, :2]))
    loss = 1.0 - (tr / 2.0) ** 2
    loss = np.where(ok, loss, 1.0)
    leak = np.sum(np.abs(psi[:, 0, 2:]) ** 2, axis=1)
    leak = np.where(ok, leak, 1.0)
    modes = np.abs(psi[:, 0, 2:]) ** 2
    return loss, leak, modes


def optimize_waveform(device: DeviceSpec, target: GateTarget | None = None,
                      g_eff_mhz: float = 8.0, config: AdamConfig | None = None,
                      n_knots: int = pulse.N_KNOTS, search_dt_ns: float = 0.02,
                      final_dt_ns: float = 0.002) -> WaveformResult:
    """Adam descent on interior knot amplitudes and the two drive detunings
    against the trace gate loss.

    Starts from the cosine-equivalent knot vector at zero detuning; after
    every Adam update the synthesis re-solves the drive amplitudes and
    duration (cyclic-condition renormalization), so each candidate is a valid
    gate schedule. Gradients are batched central differences. The baseline for
    the improvement ratio is the unoptimized cosine schedule itself.
    """
    if target is None:
        target = holonomic.swap_target()
    if config is None:
        config = AdamConfig(learning_rate=0.03, max_iterations=250,
                            fd_step=1e-3, tolerance=0.0)
    med = device.mediator_index
    g_med = (abs(device.g_mhz[0][med]), abs(device.g_mhz[1][med]))
    targets = holonomic.gate_targets_mhz(target, g_eff_mhz)
    phi = holonomic._drive_phases(device, target)

    knots0 = np.asarray(pulse.cosine_knots(n_knots)[1:-1])
    params0 = np.concatenate([knots0, [0.0, 0.0]])
    n_par = params0.size
    loss0, leak0, modes0 = _waveform_losses(
        device, target, params0[None, :], g_med, targets, phi, search_dt_ns)

    def project(z: np.ndarray) -> np.ndarray:
        out = z.copy()
        out[:-2] = np.maximum(out[:-2], 0.0)      # knot amplitudes stay >= 0
        out[-2:] = np.clip(out[-2:], -8.0, 8.0)   # detunings stay perturbative
        return out

    x = params0.copy()
    m = np.zeros_like(x)
    v = np.zeros_like(x)
    h = config.fd_step
    history = [float(loss0[0])]
    best = (float(loss0[0]), x.copy())
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        batch = np.tile(x, (2 * n_par + 1, 1))
        for i in range(n_par):
            batch[1 + 2 * i, i] += h
            batch[2 + 2 * i, i] -= h
        losses, _, _ = _waveform_losses(device, target, batch, g_med, targets,
                                        phi, search_dt_ns)
        g = (losses[1::2] - losses[2::2]) / (2.0 * h)
        m = config.beta1 * m + (1 - config.beta1) * g
        v = config.beta2 * v + (1 - config.beta2) * g * g
        m_hat = m / (1 - config.beta1**it)
        v_hat = v / (1 - config.beta2**it)
        x = project(x - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon))
        loss_x, _, _ = _waveform_losses(device, target, x[None, :], g_med, targets,
                                        phi, search_dt_ns)
        loss_now = float(loss_x[0])
        if not np.isfinite(loss_now) or loss_now > 1e6 * max(history[0], 1e-12):
            raise OptimizeError(f"waveform Adam diverged at iteration {it}")
        history.append(loss_now)
        if loss_now < best[0]:
            best = (loss_now, x.copy())
        if config.tolerance > 0 and abs(history[-1] - history[-2]) < config.tolerance:
            converged = True
            break

    # final fine-step evaluation of baseline and optimum
    loss_b, leak_b, modes_b = _waveform_losses(
        device, target, params0[None, :], g_med, targets, phi, final_dt_ns)
    loss_o, leak_o, modes_o = _waveform_losses(
        device, target, best[1][None, :], g_med, targets, phi, final_dt_ns)
    _, t_arr, _ = _knot_batch_tables(best[1][None, :-2], g_med, targets, final_dt_ns)
    result = OptimizationResult(best_params=best[1], best_loss=float(loss_o[0]),
                                history=history, iterations=it, converged=converged)
    full_knots = tuple([0.0] + [float(k) for k in best[1][:-2]] + [0.0])
    return WaveformResult(result=result, knots=full_knots,
                          deltas_mhz=(float(best[1][-2]), float(best[1][-1])),
                          baseline_loss=float(loss_b[0]),
                          baseline_leakage=float(leak_b[0]),
                          optimized_loss=float(loss_o[0]),
                          optimized_leakage=float(leak_o[0]),
                          baseline_mode_populations=modes_b[0],
                          optimized_mode_populations=modes_o[0],
                          duration_ns=float(t_arr[0]))


# ---------------------------------------------------------------------------
# lab-frame frequency calibration (transfer maximizing)
# ---------------------------------------------------------------------------

def _lab_transfer_batch(device: DeviceSpec, x_tables: np.ndarray, t_ns: float,
                        phi: tuple[float, float], wq1: np.ndarray, wq2: np.ndarray,
                        dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Dressed Q2 population and dressed mode leakage of the schedule, batched
    over qubit frequencies in the sector lab model."""
    nm = device.n_modes
    dim = 2 + nm
    n_batch = wq1.size
    n = max(int(round(t_ns / dt)), 1)
    dtl = t_ns / n
    wm = 1e3 * np.asarray(device.mode_freq_ghz)
    g = np.asarray(device.g_mhz, dtype=float)
    med = device.mediator_index

    cols_q1 = np.zeros((n_batch, dim), dtype=complex)
    proj = np.zeros((n_batch, dim, dim), dtype=complex)
    d_dressed = np.zeros((n_batch, 2))
    h = np.zeros((dim, dim))
    for jm in range(nm):
        h[2 + jm, 2 + jm] = wm[jm]
        for i in range(2):
            h[2 + jm, i] = h[i, 2 + jm] = g[i, jm]
    for p in range(n_batch):
        h[0, 0], h[1, 1] = wq1[p], wq2[p]
        w, vv = np.linalg.eigh(h)
        bare_idx, eig_idx = linear_sum_assignment(-np.abs(vv) ** 2)
        freqs = np.zeros(dim)
        for b, e in zip(bare_idx, eig_idx):
            proj[p, :, b] = vv[:, e]
            freqs[b] = w[e]
        cols_q1[p] = proj[p, :, 0]
        d_dressed[p] = freqs[2 + med] - freqs[:2]

    th = np.arange(2 * n + 1) * (dtl / 2.0)
    amp = np.zeros((n_batch, 2, th.size))
    for i in range(2):
        amp[:, i] = np.abs(d_dressed[:, i])[:, None] * x_tables[i][None, :]
    om_d = MHZ * d_dressed
    bare = np.concatenate([np.stack([wq1, wq2], axis=1), np.tile(wm, (n_batch, 1))],
                          axis=1) * MHZ
    g_ang = MHZ * g
    psi = cols_q1.copy()

    def rhs(k: int, p: np.ndarray) -> np.ndarray:
        t = k * (dtl / 2.0)
        dp = np.zeros_like(p)
        for i in range(2):
            c = g_ang[i][None, :] * np.exp(1j * (bare[:, 2:] - bare[:, i:i + 1]) * t)
            dp[:, 2:] += -1j * c * p[:, i:i + 1]
            drv = MHZ * amp[:, i, k] * np.cos(om_d[:, i] * t + phi[i])
            dp[:, i] += -1j * (np.sum(c.conj() * p[:, 2:], axis=1) + drv * p[:, i])
        return dp

    for s in range(n):
        k = 2 * s
        k1 = rhs(k, psi)
        k2 = rhs(k + 1, psi + 0.5 * dtl * k1)
        k3 = rhs(k + 1, psi + 0.5 * dtl * k2)
        k4 = rhs(k + 2, psi + dtl * k3)
        psi = psi + (dtl / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    psi = np.exp(-1j * bare * t_ns) * psi
    dressed = np.abs(np.einsum("pdk,pd->pk", proj.conj(), psi)) ** 2
    return dressed[:, 1], dressed[:, 2:].sum(axis=1)


def optimize_lab_frequencies(device: DeviceSpec, family: str, g_eff_mhz: float,
                             target: GateTarget | None = None,
                             window_mhz: float = 403.0, guard_mhz: float = 20.0,
                             coarse_step_mhz: float = 8.0, search_dt_ns: float = 0.008
                             ) -> tuple[DeviceSpec, float, float]:
    """Coarse-to-fine calibration of (wQ1, wQ2) maximizing the dressed transfer
    of the synthesized gate in the lab model. Returns (calibrated device,
    transfer population, dressed leakage)."""
    if target is None:
        target = holonomic.swap_target()
    med = device.mediator_index
    g_med = (abs(device.g_mhz[0][med]), abs(device.g_mhz[1][med]))
    shape = pulse.unit_shape(family, _U)
    x_tab, t_ns, _ = holonomic.solve_x_tables(
        g_med, holonomic.gate_targets_mhz(target, g_eff_mhz), shape)
    phi = holonomic._drive_phases(device, target)
    wm2 = 1e3 * device.mediator_freq_ghz

    def run(w1, w2, dt):
        xs, _ = _resample_half_grid(x_tab, t_ns, dt)
        return _lab_transfer_batch(device, xs, t_ns, phi, w1, w2, dt)

    g1 = np.arange(wm2 + guard_mhz, wm2 + window_mhz - guard_mhz / 2, coarse_step_mhz)
    g2 = np.arange(wm2 - window_mhz + guard_mhz / 2, wm2 - guard_mhz, coarse_step_mhz)
    w1, w2 = np.meshgrid(g1, g2, indexing="ij")
    q2, _ = run(w1.ravel(), w2.ravel(), search_dt_ns)
    k = int(np.argmax(q2))
    b1, b2 = float(w1.ravel()[k]), float(w2.ravel()[k])
    for st, half in ((2.0, coarse_step_mhz), (0.5, 2.0), (0.125, 0.5), (0.025, 0.125)):
        gg1 = b1 + np.arange(-half, half + st / 2, st)
        gg2 = b2 + np.arange(-half, half + st / 2, st)
        w1, w2 = np.meshgrid(gg1, gg2, indexing="ij")
        q2, leak = run(w1.ravel(), w2.ravel(), search_dt_ns / 2)
        k = int(np.argmax(q2))
        b1, b2 = float(w1.ravel()[k]), float(w2.ravel()[k])
    q2f, leakf = run(np.array([b1]), np.array([b2]), 0.002)
    return (device.with_qubit_freqs(b1 * 1e-3, b2 * 1e-3),
            float(q2f[0]), float(leakf[0]))
