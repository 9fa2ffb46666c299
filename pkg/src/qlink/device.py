"""Two transmons coupled through a multimode coaxial cable.

Builds the validated device description plus lab-frame and rotating-frame
Hamiltonians. Frequencies are user-facing ordinary frequencies (GHz for
carriers, MHz for couplings/detunings); Hamiltonian matrices are returned in
angular rad/ns. The single-excitation sector basis is ordered
[Q1, Q2, M0, M1, ...].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import j1, jv

from .hilbert import HilbertSpace, compose_space, destroy

if TYPE_CHECKING:
    from .pulse import DriveSignal

TWO_PI = 2.0 * np.pi
MHZ = TWO_PI * 1e-3   # MHz -> rad/ns
GHZ = TWO_PI          # GHz -> rad/ns

# v derived from the measured 15 cm <-> 403 MHz pair
CABLE_VELOCITY_M_S = 1.209e8

# first monotone branch of J1; pointwise inversions must stay inside it
J1_BRANCH_MAX = 1.8412


class DeviceError(ValueError):
    """Inconsistent or unphysical device description."""


@dataclass(frozen=True)
class DeviceSpec:
    """Validated physical description of the two-qubit + cable system."""

    qubit_freq_ghz: tuple[float, float]
    anharm_mhz: tuple[float, float]
    mode_freq_ghz: tuple[float, ...]
    mediator_index: int
    g_mhz: tuple[tuple[float, ...], tuple[float, ...]]  # signed, (2, n_modes)
    fsr_mhz: float | None = None
    cable_length_m: float | None = None
    velocity_m_s: float = CABLE_VELOCITY_M_S
    qubit_levels: int = 3

    @property
    def n_modes(self) -> int:
        return len(self.mode_freq_ghz)

    @property
    def mediator_freq_ghz(self) -> float:
        return self.mode_freq_ghz[self.mediator_index]

    def detuning_mhz(self, qubit: int) -> float:
        """Signed mediator-qubit detuning (w_M2 - w_Qi)/2pi in MHz."""
        return 1e3 * (self.mediator_freq_ghz - self.qubit_freq_ghz[qubit])

    def mode_offsets_mhz(self) -> np.ndarray:
        """Mode detunings from the mediator, MHz."""
        return 1e3 * (np.asarray(self.mode_freq_ghz) - self.mediator_freq_ghz)

    def with_qubit_freqs(self, wq1_ghz: float, wq2_ghz: float) -> "DeviceSpec":
        return DeviceSpec(
            qubit_freq_ghz=(float(wq1_ghz), float(wq2_ghz)),
            anharm_mhz=self.anharm_mhz, mode_freq_ghz=self.mode_freq_ghz,
            mediator_index=self.mediator_index, g_mhz=self.g_mhz,
            fsr_mhz=self.fsr_mhz, cable_length_m=self.cable_length_m,
            velocity_m_s=self.velocity_m_s, qubit_levels=self.qubit_levels)

    def with_mediator_shift(self, shift_mhz: float) -> "DeviceSpec":
        """Shift the mediator mode frequency (robustness protocol knob)."""
        modes = list(self.mode_freq_ghz)
        modes[self.mediator_index] += shift_mhz * 1e-3
        return DeviceSpec(
            qubit_freq_ghz=self.qubit_freq_ghz, anharm_mhz=self.anharm_mhz,
            mode_freq_ghz=tuple(modes), mediator_index=self.mediator_index,
            g_mhz=self.g_mhz, fsr_mhz=self.fsr_mhz,
            cable_length_m=self.cable_length_m, velocity_m_s=self.velocity_m_s,
            qubit_levels=self.qubit_levels)


@dataclass(frozen=True)
class NoiseSpec:
    """Relaxation/dephasing times; absent (None) means lossless channel."""

    qubit_t1_us: tuple[float, float] | None = None
    qubit_tphi_us: tuple[float, float] | None = None
    mode_t1_us: float | None = None

    def __post_init__(self):
        for v in (*(self.qubit_t1_us or ()), *(self.qubit_tphi_us or ()),
                  *([self.mode_t1_us] if self.mode_t1_us is not None else [])):
            if v <= 0:
                raise DeviceError(f"noise times must be positive, got {v}")

    @property
    def lossless(self) -> bool:
        return (self.qubit_t1_us is None and self.qubit_tphi_us is None
                and self.mode_t1_us is None)


# Calibrated so the robustness scenario reproduces the reported losses at
# delta = 3 MHz; decoherence parameters are configuration, not ground truth.
DEFAULT_NOISE = NoiseSpec(qubit_t1_us=(2.2, 2.2), qubit_tphi_us=(2.8, 2.8),
                          mode_t1_us=1.05)


def fsr_length_convert(*, length_m: float | None = None, fsr_mhz: float | None = None,
                       velocity_m_s: float = CABLE_VELOCITY_M_S) -> float:
    """Convert cable length to free spectral range or back: FSR = v / (2 L)."""
    if (length_m is None) == (fsr_mhz is None):
        raise DeviceError("pass exactly one of length_m, fsr_mhz")
    if length_m is not None:
        if length_m <= 0:
            raise DeviceError(f"length must be positive, got {length_m}")
        return velocity_m_s / (2.0 * length_m) / 1e6
    if fsr_mhz <= 0:
        raise DeviceError(f"FSR must be positive, got {fsr_mhz}")
    return velocity_m_s / (2.0 * fsr_mhz * 1e6)


def build_device(qubit_freq_ghz: Sequence[float], anharm_mhz: Sequence[float], *,
                 mode_freq_ghz: Sequence[float] | None = None,
                 mediator_index: int | None = None,
                 center_mode_ghz: float | None = None,
                 fsr_mhz: float | None = None,
                 n_modes: int = 5,
                 g_qubit_mhz: Sequence[float] = (30.26, 26.88),
                 g_modes_mhz: Sequence[Sequence[float]] | None = None,
                 cable_length_m: float | None = None,
                 velocity_m_s: float = CABLE_VELOCITY_M_S,
                 qubit_levels: int = 3) -> DeviceSpec:
    """Validate and assemble a DeviceSpec.

    Mode ladder comes either from explicit `mode_freq_ghz` (+ mediator_index)
    or from {center_mode_ghz, fsr_mhz, n_modes} with
    w_Mj = w_M2 + (j - mediator)*FSR. Couplings default to the measured
    per-qubit magnitudes replicated across modes, with the alternating sign
    rule g_2j = (-1)^(j-mediator) |g_2| anchored at g_{2,mediator} > 0.
    """
    wq = tuple(float(f) for f in qubit_freq_ghz)
    if len(wq) != 2:
        raise DeviceError("exactly two qubit frequencies required")
    alpha = tuple(float(a) for a in anharm_mhz)
    if len(alpha) != 2:
        raise DeviceError("exactly two anharmonicities required")
    for f in wq:
        if not 1.0 <= f <= 20.0:
            raise DeviceError(f"qubit frequency {f} GHz outside sane range 1-20 GHz")
    for a in alpha:
        if abs(a) >= 1000.0:
            raise DeviceError(f"anharmonicity {a} MHz outside sane range |a| < 1 GHz")

    explicit = mode_freq_ghz is not None
    ladder = center_mode_ghz is not None or fsr_mhz is not None
    if explicit and ladder:
        raise DeviceError("explicit mode list and FSR ladder are mutually exclusive")
    if explicit:
        modes = tuple(float(f) for f in mode_freq_ghz)
        if not modes:
            raise DeviceError("empty mode list")
        med = mediator_index if mediator_index is not None else len(modes) // 2
        if not 0 <= med < len(modes):
            raise DeviceError(f"mediator index {med} out of range")
        eff_fsr = None
    else:
        if center_mode_ghz is None or fsr_mhz is None:
            raise DeviceError("FSR ladder needs both center_mode_ghz and fsr_mhz")
        if fsr_mhz <= 0:
            raise DeviceError(f"FSR must be positive, got {fsr_mhz}")
        if n_modes < 1:
            raise DeviceError(f"mode count must be >= 1, got {n_modes}")
        med = n_modes // 2
        modes = tuple(center_mode_ghz + (j - med) * fsr_mhz * 1e-3 for j in range(n_modes))
        eff_fsr = float(fsr_mhz)
    for f in modes:
        if not 1.0 <= f <= 20.0:
            raise DeviceError(f"mode frequency {f} GHz outside sane range")

    if cable_length_m is not None and eff_fsr is not None:
        implied = fsr_length_convert(length_m=cable_length_m, velocity_m_s=velocity_m_s)
        if abs(implied - eff_fsr) > 0.01 * eff_fsr:
            raise DeviceError(
                f"cable length {cable_length_m} m implies FSR {implied:.1f} MHz, "
                f"inconsistent with fsr_mhz = {eff_fsr}")

    if g_modes_mhz is not None:
        g = tuple(tuple(float(x) for x in row) for row in g_modes_mhz)
        if len(g) != 2 or any(len(row) != len(modes) for row in g):
            raise DeviceError("g_modes_mhz must be shape (2, n_modes)")
    else:
        g1, g2 = (abs(float(x)) for x in g_qubit_mhz)
        g = (tuple(g1 for _ in modes),
             tuple(g2 * (-1.0) ** (j - med) for j in range(len(modes))))
    if any(x == 0 for row in g for x in row):
        raise DeviceError("couplings to modeled modes must be nonzero")

    return DeviceSpec(qubit_freq_ghz=wq, anharm_mhz=alpha, mode_freq_ghz=modes,
                      mediator_index=med, g_mhz=g, fsr_mhz=eff_fsr,
                      cable_length_m=cable_length_m, velocity_m_s=velocity_m_s,
                      qubit_levels=qubit_levels)


def paper_device(mode_form: str = "explicit", *, fsr_mhz: float = 403.0,
                 n_modes: int = 5, qubit_levels: int = 3) -> DeviceSpec:
    """Measured sample parameters; explicit 3-mode ladder or uniform FSR ladder."""
    if mode_form == "explicit":
        return build_device((6.127, 5.712), (-162.0, -162.0),
                            mode_freq_ghz=(6.36, 5.83, 5.38), mediator_index=1,
                            qubit_levels=qubit_levels)
    if mode_form == "ladder":
        return build_device((6.127, 5.712), (-162.0, -162.0),
                            center_mode_ghz=5.83, fsr_mhz=fsr_mhz, n_modes=n_modes,
                            qubit_levels=qubit_levels)
    raise DeviceError(f"unknown mode_form {mode_form!r}")


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------

def full_space(device: DeviceSpec) -> HilbertSpace:
    """Product space: two multi-level qubits then two-level cable modes."""
    dims = [device.qubit_levels, device.qubit_levels] + [2] * device.n_modes
    labels = ["Q1", "Q2"] + [f"M{j}" for j in range(device.n_modes)]
    return compose_space(dims, labels)


def sector_space(device: DeviceSpec) -> HilbertSpace:
    """Single-excitation sector written as one two-level system per subsystem.

    Basis order [Q1, Q2, M0, M1, ...]; index k is the state with subsystem k
    excited.
    """
    n = 2 + device.n_modes
    labels = ["Q1", "Q2"] + [f"M{j}" for j in range(device.n_modes)]
    return compose_space([2] * n, labels)


def sector_dim(device: DeviceSpec) -> int:
    return 2 + device.n_modes


# ---------------------------------------------------------------------------
# effective couplings (Jacobi-Anger)
# ---------------------------------------------------------------------------

def effective_coupling(g_mhz: float, amplitude_mhz: float, detuning_mhz: float,
                       delta_mhz: float = 0.0, phi_rad: float = 0.0,
                       t_ns: float = 0.0) -> complex:
    """First-sideband effective coupling g*J1(A/D)*exp(-i(delta t + phi)), MHz.

    `detuning_mhz` is the signed (w_M2 - w_Q)/2pi; J1 is odd, so the sign of
    the Bessel argument carries through to the coupling.
    """
    if detuning_mhz == 0.0:
        raise DeviceError("zero qubit-mediator detuning: Bessel argument undefined")
    x = amplitude_mhz / detuning_mhz
    return g_mhz * j1(x) * np.exp(-1j * (MHZ * delta_mhz * t_ns + phi_rad))


def second_order_coupling(g_mhz: float, amplitude_mhz: float,
                          detuning_mhz: float) -> float:
    """Magnitude of the J2 correction term, for error budgeting (MHz)."""
    if detuning_mhz == 0.0:
        raise DeviceError("zero qubit-mediator detuning: Bessel argument undefined")
    return abs(g_mhz * jv(2, amplitude_mhz / detuning_mhz))


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def lab_frame_hamiltonian(device: DeviceSpec, drives: "Sequence[DriveSignal] | None",
                          t: float) -> np.ndarray:
    """Full-space lab Hamiltonian (rad/ns): self-energies with anharmonicity,
    exchange couplings, and the diagonal parametric drive terms."""
    space = full_space(device)
    dim = space.dim
    h = np.zeros((dim, dim), dtype=complex)
    ops_a = []
    for i in range(2):
        a = destroy(device.qubit_levels)
        n_op = a.conj().T @ a
        anh = a.conj().T @ a.conj().T @ a @ a
        amp = 0.0
        if drives is not None:
            for d in drives:
                if d.qubit == i:
                    amp += d.instantaneous_shift_mhz(device, t)
        h += space.embed(
            (GHZ * device.qubit_freq_ghz[i] + MHZ * amp) * n_op
            + 0.5 * MHZ * device.anharm_mhz[i] * anh, i)
        ops_a.append(space.embed(a, i))
    for jm in range(device.n_modes):
        b = destroy(2)
        h += space.embed(GHZ * device.mode_freq_ghz[jm] * (b.conj().T @ b), 2 + jm)
        b_full = space.embed(b, 2 + jm)
        for i in range(2):
            coupling = MHZ * device.g_mhz[i][jm] * (ops_a[i].conj().T @ b_full)
            h += coupling + coupling.conj().T
    return h


def lab_static_sector(device: DeviceSpec) -> np.ndarray:
    """Drive-off lab Hamiltonian in the single-excitation sector (rad/ns)."""
    n = sector_dim(device)
    h = np.zeros((n, n), dtype=complex)
    h[0, 0] = GHZ * device.qubit_freq_ghz[0]
    h[1, 1] = GHZ * device.qubit_freq_ghz[1]
    for jm in range(device.n_modes):
        h[2 + jm, 2 + jm] = GHZ * device.mode_freq_ghz[jm]
        for i in range(2):
            h[2 + jm, i] = h[i, 2 + jm] = MHZ * device.g_mhz[i][jm]
    return h


def lab_sector_hamiltonian(device: DeviceSpec, drives: "Sequence[DriveSignal]",
                           t: float) -> np.ndarray:
    """Lab Hamiltonian restricted to the single-excitation sector (rad/ns)."""
    h = lab_static_sector(device)
    for d in drives:
        h[d.qubit, d.qubit] += MHZ * d.instantaneous_shift_mhz(device, t)
    return h


def rotating_frame_hamiltonian(device: DeviceSpec, drives: "Sequence[DriveSignal]",
                               t: float, expansion: str = "exact",
                               frame_mediator_ghz: float | None = None) -> np.ndarray:
    """Single-excitation rotating-frame Hamiltonian (rad/ns).

    expansion="exact" keeps B_i = exp(-i (w_Qi - w_M2) t - i F_i(t)) term for
    term; "bessel" truncates the Jacobi-Anger series to the resonant J1 term
    plus the J2 correction; "bessel1" keeps J1 only. `frame_mediator_ghz`
    overrides the frame reference frequency (robustness protocol: modes shift,
    drives and frame stay at the nominal calibration).
    """
    n = sector_dim(device)
    ref = (device.mediator_freq_ghz if frame_mediator_ghz is None
           else frame_mediator_ghz)
    h = np.zeros((n, n), dtype=complex)
    h[2:, 2:] = np.diag(GHZ * (np.asarray(device.mode_freq_ghz) - ref))
    for d in drives:
        b = d.frame_coefficient(device, t, expansion)
        for jm in range(device.n_modes):
            c = MHZ * device.g_mhz[d.qubit][jm] * b
            h[2 + jm, d.qubit] += c
            h[d.qubit, 2 + jm] += np.conj(c)
    return h


def dressed_sector_basis(device: DeviceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Eigenbasis of the static sector Hamiltonian, labeled by bare subsystem.

    Returns (freqs_mhz, vectors): column k of `vectors` is the dressed state
    adiabatically assigned to bare basis state k (unique max-overlap matching),
    freqs_mhz[k] its eigenfrequency in MHz.
    """
    h = lab_static_sector(device)
    w, v = np.linalg.eigh(h)
    bare_idx, eig_idx = linear_sum_assignment(-np.abs(v) ** 2)
    n = sector_dim(device)
    vecs = np.zeros((n, n), dtype=complex)
    freqs = np.zeros(n)
    for b, e in zip(bare_idx, eig_idx):
        vecs[:, b] = v[:, e]
        freqs[b] = w[e] / MHZ
    return freqs, vecs


def dressed_detunings_mhz(device: DeviceSpec) -> np.ndarray:
    """Signed dressed mediator-qubit detunings, MHz (drive calibration target)."""
    freqs, _ = dressed_sector_basis(device)
    med = 2 + device.mediator_index
    return np.array([freqs[med] - freqs[0], freqs[med] - freqs[1]])


# ---------------------------------------------------------------------------
# collapse operators
# ---------------------------------------------------------------------------

def sector01_space(device: DeviceSpec) -> HilbertSpace:
    """Vacuum plus single-excitation sector: basis [vac, Q1, Q2, M0, ...]."""
    n = 3 + device.n_modes
    labels = ["vac", "Q1", "Q2"] + [f"M{j}" for j in range(device.n_modes)]
    return compose_space([2] * n, labels)


def sector01_hamiltonian(h_sector: np.ndarray) -> np.ndarray:
    """Embed a sector Hamiltonian into the vacuum+sector representation."""
    n = h_sector.shape[0]
    h = np.zeros((n + 1, n + 1), dtype=complex)
    h[1:, 1:] = h_sector
    return h


def sector01_collapse(device: DeviceSpec, noise: NoiseSpec) -> list[np.ndarray]:
    """Collapse operators (pre-scaled by sqrt(rate), 1/ns) in the vacuum+sector rep."""
    n = 3 + device.n_modes
    ops: list[np.ndarray] = []

    def relax(k: int, t1_us: float):
        l = np.zeros((n, n), dtype=complex)
        l[0, k] = np.sqrt(1.0 / (t1_us * 1e3))
        ops.append(l)

    def dephase(k: int, tphi_us: float):
        l = np.zeros((n, n), dtype=complex)
        l[k, k] = np.sqrt(2.0 / (tphi_us * 1e3))
        ops.append(l)

    if noise.qubit_t1_us is not None:
        for i in range(2):
            relax(1 + i, noise.qubit_t1_us[i])
    if noise.qubit_tphi_us is not None:
        for i in range(2):
            dephase(1 + i, noise.qubit_tphi_us[i])
    if noise.mode_t1_us is not None:
        for jm in range(device.n_modes):
            relax(3 + jm, noise.mode_t1_us)
    return ops
