"""Fidelity/loss metrics, error fits, compensation, robustness sweep."""

import numpy as np
import pytest

from qlink.analysis import (AnalysisError, decoherence_compensated_error,
                            fit_linear_error, gate_loss, leakage,
                            repeated_gate_error, robustness_sweep, state_fidelity,
                            subspace_state)
from qlink.device import NoiseSpec, paper_device
from qlink.holonomic import (dynamic_baseline_schedule, swap_target,
                             synthesize_drives)


def test_fidelity_identical_states():
    rho = np.diag([0.3, 0.7]).astype(complex)
    assert state_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)


def test_fidelity_pure_state_overlap():
    psi = np.array([1.0, 0.0], dtype=complex)
    phi = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    assert state_fidelity(psi, phi) == pytest.approx(0.70711, abs=1e-5)


def test_fidelity_symmetric():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    sig = b @ b.conj().T
    sig /= np.trace(sig).real
    assert state_fidelity(rho, sig) == pytest.approx(state_fidelity(sig, rho), abs=1e-10)


def test_fidelity_rejects_bad_input():
    rho = np.diag([0.5, 0.5]).astype(complex)
    with pytest.raises(AnalysisError):
        state_fidelity(rho, np.diag([2.0, -1.0]).astype(complex))
    with pytest.raises(AnalysisError):
        state_fidelity(rho, np.diag([0.5, 0.5, 0.0]).astype(complex))


def test_gate_loss_identities():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    assert gate_loss(x, x) == pytest.approx(0.0, abs=1e-15)
    assert gate_loss(x, eye) == pytest.approx(1.0, abs=1e-15)
    assert gate_loss(eye, np.diag([1.0, 1j])) == pytest.approx(0.5, abs=1e-12)


def test_gate_loss_global_phase_invariant():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q, _ = np.linalg.qr(a)
    for gamma in (0.3, 1.7, np.pi):
        assert gate_loss(q, np.exp(1j * gamma) * q) == pytest.approx(0.0, abs=1e-10)


def test_leakage_sums_mode_labels():
    pops = np.array([0.4, 0.5, 0.03, 0.05, 0.02])
    labels = ("Q1", "Q2", "M0", "M1", "M2")
    assert leakage(pops, labels) == pytest.approx(0.10)


def test_subspace_state_basis_cases():
    psi = np.zeros(7, dtype=complex)
    psi[0] = 1.0  # |10>
    rho, disc = subspace_state(psi)
    np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-12)
    assert disc == pytest.approx(0.0, abs=1e-12)

    bell = np.zeros(7, dtype=complex)
    bell[0] = bell[1] = 1 / np.sqrt(2)
    rho, _ = subspace_state(bell)
    np.testing.assert_allclose(rho, np.full((2, 2), 0.5), atol=1e-12)


def test_subspace_state_records_leakage():
    psi = np.zeros(7, dtype=complex)
    psi[0] = np.sqrt(0.9)
    psi[3] = np.sqrt(0.1)
    rho, disc = subspace_state(psi)
    assert disc == pytest.approx(0.1, abs=1e-12)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


def test_subspace_state_rejects_empty():
    psi = np.zeros(7, dtype=complex)
    psi[4] = 1.0
    with pytest.raises(AnalysisError):
        subspace_state(psi)


def test_fit_linear_error_exact_synthetic():
    # the reported SWAP error rate used as a synthetic fixture
    n = np.arange(1, 11)
    p = 1.0 - 0.0184 * n
    fit = fit_linear_error(n, p)
    assert fit.error_per_gate == pytest.approx(0.0184, abs=1e-6)
    assert fit.intercept == pytest.approx(1.0, abs=1e-9)


def test_fit_linear_error_guards():
    with pytest.raises(AnalysisError):
        fit_linear_error([1, 2], [0.9, 0.8])
    with pytest.raises(AnalysisError):
        fit_linear_error([1, 2, 3, 4], [0.05, 0.04, 0.03, 0.02])


def test_repeated_gate_error_noiseless(swap_setup_calibrated):
    d, sch, _ = swap_setup_calibrated
    fit = repeated_gate_error(d, sch, 10, dt=0.01)
    # pure leakage + control error; residual coherent error accumulates over
    # the train, so the fitted slope sits a little above the one-shot loss
    assert 0.0 <= fit.error_per_gate < 2.5e-3
    assert fit.populations[0] > 0.999


def test_repeated_gate_error_grows_with_noise(swap_setup):
    d, sch = swap_setup
    light = NoiseSpec(qubit_t1_us=(50.0, 50.0))
    heavy = NoiseSpec(qubit_t1_us=(10.0, 10.0))
    f_light = repeated_gate_error(d, sch, 6, light, dt=0.02)
    f_heavy = repeated_gate_error(d, sch, 6, heavy, dt=0.02)
    assert f_heavy.error_per_gate > f_light.error_per_gate > 0


def test_decoherence_compensation_zero_noise(swap_setup):
    d, sch = swap_setup
    eps, total, dissipation = decoherence_compensated_error(d, sch, 8, None, dt=0.02)
    assert eps == total.error_per_gate
    assert dissipation.error_per_gate == 0.0


def test_decoherence_compensation_split(swap_setup):
    d, sch = swap_setup
    noise = NoiseSpec(qubit_t1_us=(20.0, 20.0), mode_t1_us=5.0)
    eps, total, dissipation = decoherence_compensated_error(d, sch, 6, noise, dt=0.02)
    assert dissipation.error_per_gate > 0
    assert eps == pytest.approx(total.error_per_gate - dissipation.error_per_gate,
                                abs=1e-12)
    assert eps < total.error_per_gate


def test_noise_only_reference_is_t1_decay():
    # identity drive under pure relaxation: fitted dissipation matches exp decay
    d = paper_device()
    sch = synthesize_drives(d, swap_target(), "cosine", 14.2836)
    noise = NoiseSpec(qubit_t1_us=(10.0, 10.0))
    _, _, dissipation = decoherence_compensated_error(d, sch, 6, noise, dt=0.02)
    per_gate = 1.0 - np.exp(-sch.t_ns / 10_000.0)
    assert dissipation.error_per_gate == pytest.approx(per_gate, rel=0.05)


def test_robustness_sweep_minimum_at_zero(swap_setup_calibrated):
    d, sch, legs = swap_setup_calibrated
    curve = robustness_sweep(d, sch, legs, [-3.0, -1.5, 0.0, 1.5, 3.0], dt=0.02)
    assert np.argmin(curve.loss_holonomic) == 2
    assert np.argmin(curve.loss_dynamic) == 2
    # approximate symmetry of the response for symmetric envelopes
    assert abs(curve.loss_holonomic[0] - curve.loss_holonomic[-1]) < 1e-2
    assert abs(curve.loss_dynamic[0] - curve.loss_dynamic[-1]) < 1e-2


def test_robustness_holonomic_beats_dynamic_closed(swap_setup_calibrated):
    d, sch, legs = swap_setup_calibrated
    curve = robustness_sweep(d, sch, legs, [0.0, 3.0], dt=0.02)
    assert curve.r_h < curve.r_d
    assert curve.reference_delta_mhz == 3.0


def test_robustness_rejects_out_of_range():
    d = paper_device()
    sch = synthesize_drives(d, swap_target(), "cosine", 14.2836)
    legs = dynamic_baseline_schedule(d, "cosine", 14.2836)
    with pytest.raises(AnalysisError):
        robustness_sweep(d, sch, legs, [0.0, 12.0])


@pytest.fixture(scope="module")
def swap_setup():
    d = paper_device()
    sch = synthesize_drives(d, swap_target(), "cosine", 14.2836)
    return d, sch


@pytest.fixture(scope="module")
def swap_setup_calibrated():
    from qlink.holonomic import calibrate_deltas
    d = paper_device()
    d0 = calibrate_deltas(d, swap_target(), "cosine", 14.2836)
    sch = synthesize_drives(d, swap_target(), "cosine", 14.2836, deltas_mhz=(d0, d0))
    legs = dynamic_baseline_schedule(d, "cosine", 14.2836)
    return d, sch, legs
