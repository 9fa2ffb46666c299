"""Envelope sampling, averages, amplitude solving, gate duration."""

import numpy as np
import pytest
from scipy.special import j1

from qlink.device import paper_device
from qlink.pulse import (Envelope, PulseError, cosine_knots, envelope_average,
                         gate_duration, invert_j1_branch, mapped_average,
                         sample_envelope, solve_bessel_peak, unit_shape)

U = np.linspace(0, 1, 4001)


def test_cosine_envelope_endpoints_and_peak():
    env = Envelope("cosine", 35.0, 120.0)
    assert sample_envelope(env, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert sample_envelope(env, 35.0) == pytest.approx(0.0, abs=1e-12)
    assert sample_envelope(env, 17.5) == pytest.approx(120.0)


def test_square_envelope_constant():
    env = Envelope("square", 20.0, 50.0)
    for t in (0.0, 3.7, 20.0):
        assert sample_envelope(env, t) == pytest.approx(50.0)


def test_gaussian_envelope_zero_ended():
    env = Envelope("gaussian", 40.0, 80.0)
    assert sample_envelope(env, 0.0) == pytest.approx(0.0, abs=1e-9)
    assert sample_envelope(env, 40.0) == pytest.approx(0.0, abs=1e-9)
    assert sample_envelope(env, 20.0) == pytest.approx(80.0)


def test_sample_envelope_rejects_out_of_range():
    env = Envelope("cosine", 35.0, 120.0)
    with pytest.raises(PulseError):
        sample_envelope(env, -1.0)
    with pytest.raises(PulseError):
        sample_envelope(env, 36.0)


def test_parameterized_knots_validation():
    with pytest.raises(PulseError):
        Envelope("parameterized", 35.0, 1.0, knots=(0.5, 1.0, 1.0, 0.0))  # end not pinned
    with pytest.raises(PulseError):
        Envelope("parameterized", 35.0, 1.0, knots=(0.0, -0.2, 1.0, 0.0))
    Envelope("parameterized", 35.0, 1.0, knots=(0.0, 0.5, 0.5, 0.0))


def test_all_equal_knots_approximate_square_average():
    # flat interior knots reproduce the square-envelope average within 1e-3
    knots = (0.0,) + (1.0,) * 14 + (0.0,)
    shape = unit_shape("parameterized", U, knots=knots)
    x = 1.0
    avg_knots = mapped_average(shape, x)
    avg_square = mapped_average(np.ones_like(U), x)
    assert abs(avg_knots - avg_square) / avg_square < 1e-1  # edges cost a few %
    # at matched support the interior is square to 1e-3
    interior = (U > 0.12) & (U < 0.88)
    assert np.max(np.abs(shape[interior] - 1.0)) < 1e-3


def test_envelope_average_square_exact():
    d = paper_device()
    env = Envelope("square", 30.0, 118.0)  # x = 1 on qubit 2
    avg = envelope_average(env, d, 1)
    assert avg == pytest.approx(26.88 * j1(1.0), rel=1e-9)


def test_envelope_average_paper_swap_values():
    # the chosen peak amplitudes reproduce the quoted 10.10 MHz averages
    d = paper_device()
    shape = unit_shape("cosine", U)
    for qubit, target in ((0, 10.10), (1, 10.10)):
        g = abs(d.g_mhz[qubit][1])
        x_pk = solve_bessel_peak(shape, target / g)
        env = Envelope("cosine", 35.0, x_pk * abs(d.detuning_mhz(qubit)))
        assert envelope_average(env, d, qubit) == pytest.approx(target, rel=2e-4)


def test_envelope_average_sqrt_swap_values():
    d = paper_device()
    shape = unit_shape("cosine", U)
    for qubit, target in ((0, 4.16), (1, 10.04)):
        g = abs(d.g_mhz[qubit][1])
        x_pk = solve_bessel_peak(shape, target / g)
        env = Envelope("cosine", 46.0, x_pk * abs(d.detuning_mhz(qubit)))
        assert envelope_average(env, d, qubit) == pytest.approx(target, rel=2e-4)


def test_solve_bessel_peak_roundtrip():
    shape = unit_shape("cosine", U)
    for target in (0.05, 0.20, 0.334, 0.3757):
        x = solve_bessel_peak(shape, target)
        assert mapped_average(shape, x) == pytest.approx(target, rel=1e-6)


def test_solve_bessel_peak_rejects_unreachable():
    shape = unit_shape("gaussian", U)
    with pytest.raises(PulseError):
        solve_bessel_peak(shape, 0.40)


def test_invert_j1_branch():
    xs = np.array([0.0, 0.1, 0.35, 0.55])
    vals = j1(xs)
    np.testing.assert_allclose(invert_j1_branch(vals), xs, atol=1e-6)
    with pytest.raises(PulseError):
        invert_j1_branch(np.array([0.60]))  # above J1 max


def test_gate_duration_paper_values():
    assert gate_duration(10.10, 10.10) == pytest.approx(35.0, abs=0.1)
    assert gate_duration(4.16, 10.04) == pytest.approx(46.0, abs=0.1)
    # single-coupling limit: bare pi transfer
    assert gate_duration(0.0, 10.0) == pytest.approx(50.0)
    with pytest.raises(PulseError):
        gate_duration(0.0, 0.0)


def test_cosine_knots_shape():
    k = cosine_knots(16)
    assert len(k) == 16 and k[0] == 0.0 and k[-1] == 0.0
    assert max(k) == pytest.approx(1.0, abs=0.02)  # knot grid straddles the peak
