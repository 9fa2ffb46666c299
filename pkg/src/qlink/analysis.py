"""Gate metrics (fidelity, loss, leakage) and experiment procedures.

Covers the repeated-gate error extraction, the dissipation-compensated error
split, and the mediator-shift robustness sweep comparing holonomic and
dynamic gates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import hilbert, holonomic
from .device import DeviceSpec, NoiseSpec
from .holonomic import GateSchedule, ScheduleResult
from .pulse import DriveSignal


class AnalysisError(ValueError):
    """Invalid metric input or unreliable extraction."""


def as_density(state: np.ndarray) -> np.ndarray:
    """Promote a state vector to a density matrix; pass density matrices through."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        state = hilbert.normalize_state(state)
        return np.outer(state, state.conj())
    return state


def _psd_sqrt(m: np.ndarray, floor: float = -1e-10) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w.min() < floor:
        raise AnalysisError(f"matrix not positive semidefinite (eigenvalue {w.min():.2e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), clipped to [0, 1]."""
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.shape != sigma.shape:
        raise AnalysisError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    for m in (rho, sigma):
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise AnalysisError("fidelity input not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-8:
            raise AnalysisError(f"fidelity input trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise AnalysisError("fidelity input not positive semidefinite")
    s = _psd_sqrt(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))))
    return min(max(f, 0.0), 1.0)


def gate_loss(v: np.ndarray, u: np.ndarray) -> float:
    """Loss = 1 - (|Tr(V^dag U)| / d)^2; invariant under global phases."""
    v = np.asarray(v, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if v.shape != u.shape or v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise AnalysisError(f"operator shape mismatch {v.shape} vs {u.shape}")
    d = v.shape[0]
    return float(1.0 - (abs(np.trace(v.conj().T @ u)) / d) ** 2)


def leakage(final_populations: np.ndarray, labels: Sequence[str]) -> float:
    """Total population in cable-mode (and higher-qubit-level) basis states."""
    final_populations = np.asarray(final_populations, dtype=float)
    if final_populations.shape != (len(labels),):
        raise AnalysisError("populations/labels length mismatch")
    out = 0.0
    for p, l in zip(final_populations, labels):
        if l.startswith("M") or l.endswith("_2"):
            out += p
    return float(out)


def subspace_state(state: np.ndarray, qubit_indices: tuple[int, int] = (0, 1)
                   ) -> tuple[np.ndarray, float]:
    """Project onto {|10>, |01>}, renormalize; returns (2x2 dm, discarded weight)."""
    rho = as_density(state)
    idx = list(qubit_indices)
    block = rho[np.ix_(idx, idx)]
    w = float(np.trace(block).real)
    if w < 1e-12:
        raise AnalysisError("subspace weight below 1e-12: renormalization undefined")
    return block / w, 1.0 - w


@dataclass
class ErrorFit:
    """Linear error-per-gate fit p(n) = p0 - eps*n."""

    error_per_gate: float
    intercept: float
    residual: float
    n_gates: tuple[int, ...]
    populations: tuple[float, ...]


def fit_linear_error(n_gates: Sequence[int], populations: Sequence[float]) -> ErrorFit:
    """Least-squares slope of the population decay over gate number."""
    n = np.asarray(n_gates, dtype=float)
    p = np.asarray(populations, dtype=float)
    if n.size < 3:
        raise AnalysisError(f"need >= 3 points for the linear fit, got {n.size}")
    below = p < 0.1
    if below.any() and np.flatnonzero(below)[0] < 3:
        raise AnalysisError("population decays below 0.1 before 3 points: fit unreliable")
    a = np.vstack([np.ones_like(n), n]).T
    coef, res, *_ = np.linalg.lstsq(a, p, rcond=None)
    eps = float(max(-coef[1], 0.0))
    if eps > 1.0:
        raise AnalysisError(f"fitted error per gate {eps} > 1")
    residual = float(np.sqrt(res[0] / n.size)) if res.size else 0.0
    return ErrorFit(error_per_gate=eps, intercept=float(coef[0]), residual=residual,
                    n_gates=tuple(int(x) for x in n), populations=tuple(float(x) for x in p))


def _ideal_orbit(schedule_target, n_max: int) -> np.ndarray:
    """Ideal two-level states V^n |10> for n = 1..n_max."""
    if schedule_target is None:
        v = np.array([[0, -1], [-1, 0]], dtype=complex)  # pi-transfer pair acts as swap
    else:
        v = holonomic.target_unitary(schedule_target.theta, schedule_target.phi)
    states = np.zeros((n_max + 1, 2), dtype=complex)
    states[0] = (1.0, 0.0)
    for k in range(1, n_max + 1):
        states[k] = v @ states[k - 1]
    return states


def _propagate_column(device: DeviceSpec, gate: Sequence[GateSchedule],
                      psi0: np.ndarray, dt: float) -> np.ndarray:
    from . import device as dev
    psi = psi0.copy()
    diag = np.concatenate([[0.0, 0.0], dev.MHZ * device.mode_offsets_mhz()])
    for sch in gate:
        h = lambda t, s=sch: dev.rotating_frame_hamiltonian(device, s.drives, t, "bessel")
        traj = hilbert.propagate_state(h, psi, [0.0, sch.t_ns], dt, static_diag=diag)
        psi = traj.final_state
    return psi


def repeated_gate_error(device: DeviceSpec, gate: GateSchedule | Sequence[GateSchedule],
                        n_max: int, noise: NoiseSpec | None = None,
                        dt: float = hilbert.DEFAULT_DT) -> ErrorFit:
    """Simulate n = 1..n_max sequential gates from |10> and fit the linear decay.

    The tracked population is the overlap with the ideal-gate orbit
    V^n |10> (for SWAP this is exactly the alternating bare qubit population).
    """
    if n_max < 3:
        raise AnalysisError(f"n_max must be >= 3, got {n_max}")
    gate = [gate] if isinstance(gate, GateSchedule) else list(gate)
    target = gate[0].target if len(gate) == 1 else None
    orbit = _ideal_orbit(target, n_max)
    pops = np.zeros(n_max)
    if noise is None or noise.lossless:
        dim = 2 + device.n_modes
        u_gate = np.zeros((dim, dim), dtype=complex)
        for c in range(dim):
            e = np.zeros(dim, dtype=complex)
            e[c] = 1.0
            u_gate[:, c] = _propagate_column(device, gate, e, dt)
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
        for k in range(1, n_max + 1):
            psi = u_gate @ psi
            pops[k - 1] = abs(np.vdot(orbit[k], psi[:2])) ** 2
    else:
        from . import device as dev
        n01 = 3 + device.n_modes
        rho = np.zeros((n01, n01), dtype=complex)
        rho[1, 1] = 1.0
        collapse = dev.sector01_collapse(device, noise)
        diag = np.concatenate([[0.0, 0.0, 0.0], dev.MHZ * device.mode_offsets_mhz()])
        for k in range(1, n_max + 1):
            for sch in gate:
                h = lambda t, s=sch: dev.sector01_hamiltonian(
                    dev.rotating_frame_hamiltonian(device, s.drives, t, "bessel"))
                traj = hilbert.propagate_lindblad(h, collapse, rho, [0.0, sch.t_ns],
                                                  dt, static_diag=diag)
                rho = traj.final_state
            block = rho[1:3, 1:3]
            pops[k - 1] = float(np.real(orbit[k].conj() @ block @ orbit[k]))
    return fit_linear_error(np.arange(1, n_max + 1), pops)


def decoherence_compensated_error(device: DeviceSpec,
                                  gate: GateSchedule | Sequence[GateSchedule],
                                  n_max: int, noise: NoiseSpec | None,
                                  dt: float = hilbert.DEFAULT_DT
                                  ) -> tuple[float, ErrorFit, ErrorFit]:
    """Coherent error = total error minus the dissipation-only reference.

    The reference run keeps the same schedule durations with the drives
    replaced by identity dynamics under the same Lindblad rates. Returns
    (eps_coherent, total fit, dissipation fit).
    """
    gate_list = [gate] if isinstance(gate, GateSchedule) else list(gate)
    total = repeated_gate_error(device, gate_list, n_max, noise, dt)
    if noise is None or noise.lossless:
        return total.error_per_gate, total, ErrorFit(0.0, 1.0, 0.0, total.n_gates,
                                                     tuple(1.0 for _ in total.n_gates))
    from . import device as dev
    t_gate = sum(s.t_ns for s in gate_list)
    n01 = 3 + device.n_modes
    rho = np.zeros((n01, n01), dtype=complex)
    rho[1, 1] = 1.0
    collapse = dev.sector01_collapse(device, noise)
    h = lambda t: np.zeros((n01, n01), dtype=complex)
    pops = np.zeros(n_max)
    for k in range(1, n_max + 1):
        traj = hilbert.propagate_lindblad(h, collapse, rho, [0.0, t_gate], dt)
        rho = traj.final_state
        pops[k - 1] = float(np.real(rho[1, 1]))
    dissipation = fit_linear_error(np.arange(1, n_max + 1), pops)
    eps = total.error_per_gate - dissipation.error_per_gate
    return eps, total, dissipation


@dataclass
class RobustnessCurve:
    """Loss vs mediator frequency shift for holonomic and dynamic gates."""

    delta_mhz: np.ndarray
    loss_holonomic: np.ndarray
    loss_dynamic: np.ndarray
    reference_delta_mhz: float
    r_h: float
    r_d: float
    r_r: float


def _pin_carriers(device: DeviceSpec, schedules: Sequence[GateSchedule]
                  ) -> list[GateSchedule]:
    """Freeze drive carriers at the unshifted device's calibration."""
    out = []
    for sch in schedules:
        drives = tuple(
            DriveSignal(qubit=d.qubit, envelope=d.envelope, delta_mhz=d.delta_mhz,
                        phi_rad=d.phi_rad,
                        carrier_detuning_mhz=device.detuning_mhz(d.qubit))
            for d in sch.drives)
        out.append(GateSchedule(drives=drives, t_ns=sch.t_ns, target=sch.target,
                                frame=sch.frame, averages_mhz=sch.averages_mhz))
    return out


def robustness_sweep(device: DeviceSpec, holonomic_gate: GateSchedule,
                     dynamic_gate: Sequence[GateSchedule], delta_grid_mhz: Sequence[float],
                     noise: NoiseSpec | None = None, dt: float = hilbert.DEFAULT_DT,
                     reference_delta_mhz: float = 3.0) -> RobustnessCurve:
    """Shift the mediator mode, hold drive frequencies fixed, record the
    final target-population loss of both gates from |10>."""
    grid = np.asarray(delta_grid_mhz, dtype=float)
    if np.max(np.abs(grid)) > 10.0:
        raise AnalysisError("mediator shifts beyond +-10 MHz are out of protocol range")
    holo = _pin_carriers(device, [holonomic_gate])
    dyn = _pin_carriers(device, list(dynamic_gate))
    nominal = device.mediator_freq_ghz
    loss_h = np.zeros(grid.size)
    loss_d = np.zeros(grid.size)
    for k, d_mhz in enumerate(grid):
        shifted = device.with_mediator_shift(float(d_mhz))
        res_h = holonomic.simulate_schedule(shifted, holo, noise=noise, dt=dt,
                                            frame_mediator_ghz=nominal)
        res_d = holonomic.simulate_schedule(shifted, dyn, noise=noise, dt=dt,
                                            frame_mediator_ghz=nominal)
        loss_h[k] = 1.0 - res_h.population("Q2")
        loss_d[k] = 1.0 - res_d.population("Q2")
    k_ref = int(np.argmin(np.abs(grid - reference_delta_mhz)))
    r_h, r_d = float(loss_h[k_ref]), float(loss_d[k_ref])
    r_r = (r_d - r_h) / r_d if r_d > 0 else 0.0
    return RobustnessCurve(delta_mhz=grid, loss_holonomic=loss_h, loss_dynamic=loss_d,
                           reference_delta_mhz=float(grid[k_ref]), r_h=r_h, r_d=r_d,
                           r_r=float(r_r))
