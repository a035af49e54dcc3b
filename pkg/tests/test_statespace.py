import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from dering import (ComplexFrequency, ContinuousModel, KalmanModel,
                    OscillatorParams, Overdamped, build_noise,
                    characteristic_root, continuous_model, discretize,
                    from_complex_root, kalman_model)
from dering.statespace import expm

# physical ranges shared by the property tests; discretization draws are
# additionally constrained to freq*dt below Nyquist (a sampled model with
# the ring above Nyquist is never built by the library)
freqs = st.floats(min_value=0.05, max_value=500.0)
dampings = st.floats(min_value=0.0, max_value=50.0)
dts = st.floats(min_value=1e-4, max_value=1e-1)


def test_params_validation():
    with pytest.raises(ValueError):
        OscillatorParams(a=-0.1, b=1.0)
    with pytest.raises(ValueError):
        OscillatorParams(a=0.1, b=0.0)
    with pytest.raises(ValueError):
        OscillatorParams(a=0.1, b=1.0, force_scale=0.0)
    assert OscillatorParams(a=0.1, b=1000.0).underdamped
    assert not OscillatorParams(a=10.0, b=1.0).underdamped


def test_complex_frequency_validation():
    with pytest.raises(ValueError):
        ComplexFrequency(freq_hz=0.0)
    with pytest.raises(ValueError):
        ComplexFrequency(freq_hz=10.0, damping_rate=-1.0)


def test_from_complex_root_reference_coefficients():
    p = from_complex_root(ComplexFrequency(freq_hz=5.0329, damping_rate=0.05))
    assert p.a == pytest.approx(0.1, abs=1e-15)
    assert p.b == pytest.approx(1000.0, rel=1e-4)


def test_from_complex_root_undamped():
    p = from_complex_root(ComplexFrequency(freq_hz=7.0))
    assert p.a == 0.0
    assert p.b == pytest.approx((2 * math.pi * 7.0) ** 2)


def test_from_complex_root_against_polynomial_roots():
    # independent check: the quadratic's actual roots carry the requested ring
    lam = 2.0
    p = from_complex_root(ComplexFrequency(freq_hz=40.0, damping_rate=lam))
    assert p.b == pytest.approx((80 * math.pi) ** 2 + lam * lam)
    roots = np.roots([1.0, p.a, p.b])
    assert np.max(np.abs(roots.real + lam)) < 1e-9
    assert abs(np.max(np.abs(roots.imag)) / (2 * math.pi) - 40.0) < 1e-9


@given(freq=freqs, lam=dampings)
@settings(max_examples=300, deadline=None)
def test_root_roundtrip(freq, lam):
    omega = ComplexFrequency(freq_hz=freq, damping_rate=lam)
    back = characteristic_root(from_complex_root(omega))
    assert back.freq_hz == pytest.approx(freq, rel=1e-12)
    assert back.damping_rate == pytest.approx(lam, rel=1e-12, abs=1e-12)


def test_characteristic_root_overdamped():
    with pytest.raises(Overdamped):
        characteristic_root(OscillatorParams(a=10.0, b=1.0))
    with pytest.raises(Overdamped):  # critically damped: no ring either
        characteristic_root(OscillatorParams(a=2.0, b=1.0))


def test_continuous_model_reference_rows():
    A = continuous_model(OscillatorParams(a=0.1, b=1000.0)).A
    assert np.array_equal(A, [[0.0, 1.0, 0.0],
                              [-1000.0, -0.1, 1000.0],
                              [0.0, 0.0, 0.0]])
    A = continuous_model(OscillatorParams(a=0.0, b=1.0)).A
    assert np.array_equal(A, [[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 0.0, 0.0]])


@given(freq=freqs, lam=dampings, scale=st.floats(min_value=1e-6, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_continuous_model_structure(freq, lam, scale):
    p = from_complex_root(ComplexFrequency(freq, lam), force_scale=scale)
    A = continuous_model(p).A
    assert np.array_equal(A[0], [0.0, 1.0, 0.0])  # bitwise fixed rows
    assert np.array_equal(A[2], [0.0, 0.0, 0.0])
    assert A[1, 0] == -p.b and A[1, 1] == -p.a
    assert A[1, 2] == pytest.approx(p.b * scale, rel=1e-15)


def test_discretize_zero_dt_is_identity():
    m = continuous_model(OscillatorParams(a=0.1, b=1000.0))
    assert np.array_equal(discretize(m, 0.0), np.eye(3))
    with pytest.raises(ValueError):
        discretize(m, -1e-3)


@given(freq=freqs, lam=dampings, dt=dts)
@settings(max_examples=300, deadline=None)
def test_discretize_matches_series_oracle(freq, lam, dt):
    assume(freq * dt <= 0.45)
    m = continuous_model(from_complex_root(ComplexFrequency(freq, lam)))
    phi = discretize(m, dt)
    ref = oracles.expm_series(m.A * dt)
    assert np.max(np.abs(phi - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))


@given(freq=freqs, lam=dampings, dt=dts)
@settings(max_examples=200, deadline=None)
def test_discretize_matches_closed_form(freq, lam, dt):
    assume(freq * dt <= 0.45)
    p = from_complex_root(ComplexFrequency(freq, lam))
    phi = discretize(continuous_model(p), dt)
    ref = oracles.oscillator_phi(p.a, p.b, p.force_scale, dt)
    assert np.max(np.abs(phi - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))


@given(freq=freqs, lam=dampings, t1=dts, t2=dts)
@settings(max_examples=300, deadline=None)
def test_discretize_semigroup(freq, lam, t1, t2):
    assume(freq * (t1 + t2) <= 0.45)
    m = continuous_model(from_complex_root(ComplexFrequency(freq, lam)))
    lhs = discretize(m, t1) @ discretize(m, t2)
    rhs = discretize(m, t1 + t2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))


def test_discretize_reference_semigroup_pair():
    m = continuous_model(OscillatorParams(a=0.1, b=1000.0))
    M = discretize(m, 0.001)
    assert np.max(np.abs(M @ M - discretize(m, 0.002))) < 1e-9


def test_discretize_undamped_full_period():
    # x'' + (2 pi)^2 x = 0 returns to its initial state after 1 s
    m = continuous_model(OscillatorParams(a=0.0, b=(2 * math.pi) ** 2))
    phi = discretize(m, 1.0)
    assert np.max(np.abs(phi[:2, :2] - np.eye(2))) < 1e-8


@given(freq=freqs, lam=dampings, dt=dts, f0=st.floats(-1e6, 1e6))
@settings(max_examples=200, deadline=None)
def test_force_component_is_constant(freq, lam, dt, f0):
    m = continuous_model(from_complex_root(ComplexFrequency(freq, lam)))
    phi = discretize(m, dt)
    assert (phi @ np.array([0.0, 0.0, f0]))[2] == f0  # third row is (0,0,1) exactly


def test_build_noise_reference_values():
    Q, R = build_noise(0.001, 1e5)
    assert np.array_equal(Q, np.diag([0.001, 0.001, 1e5]))
    assert R == 0.001
    Q, R = build_noise(1.0, 1.0)
    assert np.array_equal(Q, np.eye(3))
    assert build_noise(0.001, 2e5)[0][2, 2] == 2e5


def test_build_noise_velocity_override():
    Q, _ = build_noise(0.5, 2.0, sigma_v2=7.0)
    assert Q[1, 1] == 7.0 and Q[0, 0] == 0.5 and Q[2, 2] == 2.0


def test_build_noise_rejects_nonpositive():
    for bad in [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (1.0, -1.0)]:
        with pytest.raises(ValueError):
            build_noise(*bad)


def test_kalman_model_assembly():
    p = OscillatorParams(a=0.1, b=1000.0)
    m = kalman_model(p, 1e-3, 0.001, 1e5)
    assert m.dt == 1e-3
    assert np.array_equal(m.H, [1.0, 0.0, 0.0])
    assert np.array_equal(m.phi, discretize(continuous_model(p), 1e-3))
    assert np.linalg.det(m.phi) > 0.0
    with pytest.raises(ValueError):
        kalman_model(p, 0.0, 0.001, 1e5)


def test_kalman_model_validation():
    with pytest.raises(ValueError):  # off-diagonal Q
        KalmanModel(phi=np.eye(3), Q=np.full((3, 3), 1.0), R=1.0, dt=1e-3)
    with pytest.raises(ValueError):
        KalmanModel(phi=np.eye(3), Q=np.eye(3), R=0.0, dt=1e-3)
    with pytest.raises(ValueError):  # negative-determinant transition
        KalmanModel(phi=np.diag([-1.0, 1.0, 1.0]), Q=np.eye(3), R=1.0, dt=1e-3)


def test_continuous_model_shape_check():
    with pytest.raises(ValueError):
        ContinuousModel(A=np.eye(2))


def test_expm_identity_and_nilpotent():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))
    N = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    want = np.eye(3) + N + N @ N / 2.0  # series terminates for nilpotent input
    assert np.max(np.abs(expm(N) - want)) < 1e-15


@given(scale=st.floats(min_value=1e-3, max_value=30.0))
@settings(max_examples=100, deadline=None)
def test_expm_scalar_block(scale):
    E = expm(np.diag([scale, -scale, 0.0]))
    assert E[0, 0] == pytest.approx(math.exp(scale), rel=1e-12)
    assert E[1, 1] == pytest.approx(math.exp(-scale), rel=1e-12)
    assert E[2, 2] == pytest.approx(1.0, rel=1e-14)
