"""Envelope families, drive signals, envelope averages and gate duration.

Envelopes are flux-pulse amplitude profiles A(t) in MHz. The effective
exchange coupling they induce is g*J1(A(t)/D) with D the signed
mediator-qubit detuning; averages of that mapped envelope set the gate
duration through the cyclic condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import j1, jv

from .device import MHZ, TWO_PI, DeviceSpec, DeviceError, J1_BRANCH_MAX

ENVELOPE_KINDS = ("square", "gaussian", "cosine", "parameterized", "sampled")
N_KNOTS = 16
GAUSSIAN_SIGMA_FRAC = 1.0 / 6.0  # sigma = T/6, truncated at +-3 sigma

_U = np.linspace(0.0, 1.0, 4001)
_XB = np.linspace(0.0, J1_BRANCH_MAX, 4001)
_J1B = j1(_XB)


class PulseError(ValueError):
    """Invalid envelope or drive construction."""


@dataclass(frozen=True)
class Envelope:
    """Flux-pulse amplitude profile; `a_pk_mhz` scales a unit-peak shape."""

    kind: str
    t_ns: float
    a_pk_mhz: float
    knots: tuple[float, ...] | None = None         # parameterized
    samples: tuple[float, ...] | None = None       # sampled (synthesis output)
    sigma_frac: float = GAUSSIAN_SIGMA_FRAC

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise PulseError(f"unknown envelope kind {self.kind!r}")
        if self.t_ns <= 0:
            raise PulseError(f"duration must be positive, got {self.t_ns}")
        if not np.isfinite(self.a_pk_mhz) or self.a_pk_mhz < 0:
            raise PulseError(f"peak amplitude must be finite and >= 0, got {self.a_pk_mhz}")
        if self.kind == "parameterized":
            if self.knots is None or len(self.knots) < 4:
                raise PulseError("parameterized envelope needs >= 4 knots")
            if self.knots[0] != 0.0 or self.knots[-1] != 0.0:
                raise PulseError("parameterized envelope endpoints must be pinned to zero")
            if any(k < 0 or not np.isfinite(k) for k in self.knots):
                raise PulseError("knot amplitudes must be finite and >= 0")
        if self.kind == "sampled" and (self.samples is None or len(self.samples) < 2):
            raise PulseError("sampled envelope needs a sample table")


def unit_shape(kind: str, u: np.ndarray, *, knots: Sequence[float] | None = None,
               samples: Sequence[float] | None = None,
               sigma_frac: float = GAUSSIAN_SIGMA_FRAC) -> np.ndarray:
    """Normalized (unit peak) envelope shape on u in [0, 1]."""
    u = np.asarray(u, dtype=float)
    if kind == "square":
        return np.ones_like(u)
    if kind == "cosine":
        return 0.5 * (1.0 - np.cos(TWO_PI * u))
    if kind == "gaussian":
        off = np.exp(-0.25 / (2.0 * sigma_frac**2))
        s = (np.exp(-((u - 0.5) ** 2) / (2.0 * sigma_frac**2)) - off) / (1.0 - off)
        return np.maximum(s, 0.0)
    if kind == "parameterized":
        uk = np.linspace(0.0, 1.0, len(knots))
        s = PchipInterpolator(uk, np.asarray(knots, dtype=float))(u)
        s = np.maximum(s, 0.0)
        m = s.max() if s.size else 0.0
        return s / m if m > 0 else s
    if kind == "sampled":
        grid = np.linspace(0.0, 1.0, len(samples))
        return np.interp(u, grid, np.asarray(samples, dtype=float))
    raise PulseError(f"unknown envelope kind {kind!r}")


def cosine_knots(n: int = N_KNOTS) -> tuple[float, ...]:
    """Knot vector reproducing the cosine shape (Adam initial guess)."""
    u = np.linspace(0.0, 1.0, n)
    k = 0.5 * (1.0 - np.cos(TWO_PI * u))
    k[0] = k[-1] = 0.0
    return tuple(k)


def sample_envelope(env: Envelope, t: float | np.ndarray) -> float | np.ndarray:
    """Amplitude A(t) in MHz; t must lie in [0, T]."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < -1e-12) or np.any(t_arr > env.t_ns + 1e-12):
        raise PulseError(f"time outside [0, {env.t_ns}] ns")
    u = np.clip(t_arr / env.t_ns, 0.0, 1.0)
    vals = env.a_pk_mhz * unit_shape(env.kind, u, knots=env.knots,
                                     samples=env.samples, sigma_frac=env.sigma_frac)
    return float(vals) if np.isscalar(t) else vals


@dataclass(frozen=True)
class DriveSignal:
    """Parametric modulation of one qubit: envelope, detuning and phase.

    The carrier (modulation) frequency is w_M2 - w_Q + delta; by default the
    bare device detuning is used, lab-frame runs override it with the dressed
    calibration value.
    """

    qubit: int
    envelope: Envelope
    delta_mhz: float = 0.0
    phi_rad: float = 0.0
    carrier_detuning_mhz: float | None = None

    def carrier_mhz(self, device: DeviceSpec) -> float:
        base = (self.carrier_detuning_mhz if self.carrier_detuning_mhz is not None
                else device.detuning_mhz(self.qubit))
        return base + self.delta_mhz

    def modulation_freq_mhz(self, device: DeviceSpec) -> float:
        """|Delta| = |w_Q - w_M2 + delta| in MHz (ordinary frequency)."""
        return abs(self.carrier_mhz(device))

    def amplitude_mhz(self, t: float | np.ndarray) -> float | np.ndarray:
        return sample_envelope(self.envelope, t)

    def instantaneous_shift_mhz(self, device: DeviceSpec, t: float) -> float:
        """Lab-frame qubit frequency shift A(t) cos(carrier*t + phi), MHz."""
        om = MHZ * self.carrier_mhz(device)
        return self.amplitude_mhz(t) * np.cos(om * t + self.phi_rad)

    def frame_coefficient(self, device: DeviceSpec, t: float | np.ndarray,
                          expansion: str = "exact"):
        """Rotating-frame coupling coefficient B(t) (dimensionless).

        "exact": exp(-i(w_Q - w_M2)t - iF(t)) with the quasi-static phase
        F = (A/(D+delta)) sin((D+delta)t + phi); "bessel": J1 + J2 terms of its
        Jacobi-Anger expansion; "bessel1": resonant J1 term only.
        """
        a = self.amplitude_mhz(t)
        d_bare = device.detuning_mhz(self.qubit)
        d_drive = self.carrier_mhz(device)
        if d_drive == 0.0 or d_bare == 0.0:
            raise DeviceError("zero qubit-mediator detuning")
        if expansion == "exact":
            f = (a / d_drive) * np.sin(MHZ * d_drive * t + self.phi_rad)
            return np.exp(1j * MHZ * d_bare * t - 1j * f)
        x = a / d_drive
        b = j1(x) * np.exp(-1j * (MHZ * self.delta_mhz * t + self.phi_rad))
        if expansion == "bessel":
            b = b + jv(2, x) * np.exp(-1j * (MHZ * (d_drive + self.delta_mhz) * t
                                             + 2.0 * self.phi_rad))
        elif expansion != "bessel1":
            raise DeviceError(f"unknown expansion {expansion!r}")
        return b


# ---------------------------------------------------------------------------
# averages, amplitude solving, duration
# ---------------------------------------------------------------------------

def mapped_average(shape_vals: np.ndarray, x_pk: float) -> float:
    """Time average of |J1(x_pk * s(u))| over the unit-peak shape table."""
    return float(np.trapezoid(np.abs(j1(x_pk * shape_vals)), _U))


def solve_bessel_peak(shape_vals: np.ndarray, target_ratio: float) -> float:
    """Peak Bessel argument x_pk with avg_u |J1(x_pk s(u))| = target_ratio.

    The average map is inverted on its monotone rise up to its argmax, which
    extends past the first J1 branch for peaked shapes; targets above the
    achievable maximum raise.
    """
    if target_ratio < 0:
        raise PulseError(f"negative coupling target {target_ratio}")
    if target_ratio == 0:
        return 0.0
    # golden-section argmax of the average map on [0, 3.2]
    lo, hi = 0.0, 3.2
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = mapped_average(shape_vals, c), mapped_average(shape_vals, d)
    for _ in range(50):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = mapped_average(shape_vals, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = mapped_average(shape_vals, d)
    x_max = 0.5 * (a + b)
    avg_max = mapped_average(shape_vals, x_max)
    if target_ratio > avg_max:
        raise PulseError(
            f"coupling target {target_ratio:.5f} exceeds achievable average "
            f"{avg_max:.5f} for this envelope shape")
    return float(brentq(lambda x: mapped_average(shape_vals, x) - target_ratio,
                        0.0, x_max, xtol=1e-10))


def invert_j1_branch(values: np.ndarray) -> np.ndarray:
    """Pointwise J1 inverse on the first monotone branch (argument <= 1.8412)."""
    values = np.asarray(values, dtype=float)
    if values.max(initial=0.0) > _J1B[-1]:
        raise PulseError(
            f"J1 inversion out of range: requested {values.max():.5f} > "
            f"J1 max {_J1B[-1]:.5f}")
    return np.interp(values, _J1B, _XB)


def envelope_average(env: Envelope, device: DeviceSpec, qubit: int) -> float:
    """Average effective coupling g^a = (1/T) int |g J1(A(t)/D)| dt, MHz."""
    if env.t_ns <= 0:
        raise PulseError("zero-duration envelope")
    d = device.detuning_mhz(qubit)
    if d == 0.0:
        raise DeviceError("zero qubit-mediator detuning")
    shape = unit_shape(env.kind, _U, knots=env.knots, samples=env.samples,
                       sigma_frac=env.sigma_frac)
    g = abs(device.g_mhz[qubit][device.mediator_index])
    return g * mapped_average(shape, env.a_pk_mhz / abs(d))


def gate_duration(g12_mhz: float, g22_mhz: float) -> float:
    """Cyclic-condition gate duration T = 1/(2 g_eff) in ns, averages in MHz."""
    if g12_mhz < 0 or g22_mhz < 0:
        raise PulseError("averages must be non-negative")
    g_eff = float(np.hypot(g12_mhz, g22_mhz))
    if g_eff == 0.0:
        raise PulseError("both envelope averages are zero")
    return 500.0 / g_eff
