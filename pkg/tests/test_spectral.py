import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dering import (NoPeak, Spectrum, TimeSeries, dominant_frequency,
                    estimate_damping, periodogram, top_peaks)
from dering.rng import SplitMix64

DT = 1e-3


def tone(freq, n=4000, amp=1.0, lam=0.0, noise=0.0, seed=0, dt=DT, phase=0.0):
    t = dt * np.arange(n)
    x = amp * np.exp(-lam * t) * np.sin(2 * math.pi * freq * t + phase)
    if noise > 0.0:
        x = x + noise * np.asarray(SplitMix64(seed).gaussians(n))
    return TimeSeries(dt=dt, values=x)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum(freqs_hz=[1.0, 2.0], power=[1.0])
    with pytest.raises(ValueError):
        Spectrum(freqs_hz=[2.0, 1.0], power=[1.0, 1.0])
    with pytest.raises(ValueError):
        Spectrum(freqs_hz=[1.0, 2.0], power=[1.0, -1.0])


def test_periodogram_grid():
    s = tone(40.0, n=1000)
    spec = periodogram(s)
    assert spec.freqs_hz[0] == pytest.approx(1.0)  # 1/(n dt)
    assert spec.freqs_hz[-1] == pytest.approx(500.0)  # Nyquist
    assert len(spec.freqs_hz) == 500


def test_periodogram_needs_min_samples():
    with pytest.raises(ValueError, match="16"):
        periodogram(TimeSeries(dt=DT, values=np.zeros(15)))


def test_periodogram_energy_normalization():
    s = tone(40.0, n=2048)
    spec = periodogram(s)
    centered = s.values - s.values.mean()
    assert np.sum(spec.power) == pytest.approx(np.sum(centered ** 2), rel=1e-12)


def test_periodogram_removes_mean():
    flat = TimeSeries(dt=DT, values=np.full(256, 7.5))
    assert np.all(periodogram(flat).power == 0.0)
    offset = tone(40.0, n=2048).with_values(tone(40.0, n=2048).values + 100.0)
    spec = periodogram(offset)
    # DC offset must not leak into the low bins
    assert np.argmax(spec.power) == np.argmax(periodogram(tone(40.0, n=2048)).power)


def test_single_tone_lands_in_its_bin():
    # 40 Hz on a 4000-sample 1 kHz record: exactly bin 160, width 0.25 Hz
    peak = dominant_frequency(tone(40.0))
    assert abs(peak.freq_hz - 40.0) < 0.25


def test_offbin_tone_refined_between_bins():
    peak = dominant_frequency(tone(40.1, n=4000))
    assert abs(peak.freq_hz - 40.1) < 0.25
    assert peak.freq_hz != pytest.approx(40.0, abs=1e-9)  # parabolic shift applied


@given(freq=st.floats(5.0, 400.0), phase=st.floats(0.0, 2 * math.pi),
       seed=st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_tone_found_within_one_bin_at_20db_snr(freq, phase, seed):
    # amplitude 1 tone, sigma 0.07 noise: ~20 dB SNR
    s = tone(freq, n=4000, noise=0.07, seed=seed, phase=phase)
    peak = dominant_frequency(s)
    assert abs(peak.freq_hz - freq) <= 1.0 / (4000 * DT)


@given(scale=st.floats(1e-6, 1e6), freq=st.floats(5.0, 400.0))
@settings(max_examples=60, deadline=None)
def test_argmax_scale_invariant(scale, freq):
    s = tone(freq, noise=0.01, seed=5)
    scaled = s.with_values(s.values * scale)
    assert dominant_frequency(scaled).freq_hz == dominant_frequency(s).freq_hz


def test_determinism():
    s = tone(40.0, noise=0.1, seed=3)
    a = periodogram(s)
    b = periodogram(TimeSeries(dt=DT, values=s.values.copy()))
    assert np.array_equal(a.power, b.power)
    assert dominant_frequency(s) == dominant_frequency(s)


def test_flat_spectrum_raises_no_peak():
    with pytest.raises(NoPeak):
        dominant_frequency(TimeSeries(dt=DT, values=np.full(1024, 3.0)))
    assert top_peaks(TimeSeries(dt=DT, values=np.full(1024, 3.0))) == []


def test_top_peaks_orders_by_power():
    t = DT * np.arange(8000)
    x = 3.0 * np.sin(2 * math.pi * 40.0 * t) + 1.0 * np.sin(2 * math.pi * 12.2 * t)
    peaks = top_peaks(TimeSeries(dt=DT, values=x), count=5, with_damping=False)
    assert len(peaks) >= 2
    assert abs(peaks[0].freq_hz - 40.0) < 0.125
    assert abs(peaks[1].freq_hz - 12.2) < 0.125
    assert peaks[0].power > peaks[1].power
    assert top_peaks(TimeSeries(dt=DT, values=x), count=1)[0].freq_hz == peaks[0].freq_hz


def test_damping_reference_ringdown():
    # 2 1/s ring at 40 Hz over 4 s of 1 kHz data
    lam = estimate_damping(tone(40.0, lam=2.0), 40.0)
    assert 1.6 <= lam <= 2.4
    assert lam == pytest.approx(2.0, rel=0.02)


def test_damping_tracks_rate_across_window_products():
    # lambda * T from 0.5 to 5 at two record lengths
    for T, n in ((4.0, 4000), (1.0, 1000)):
        for lam_T in (0.5, 1.0, 2.0, 3.5, 5.0):
            lam = lam_T / T
            est = estimate_damping(tone(40.0, n=n, lam=lam), 40.0)
            assert est == pytest.approx(lam, rel=0.02)


def test_damping_undamped_is_zero():
    assert estimate_damping(tone(40.0), 40.0) == 0.0


def test_damping_survives_light_noise():
    est = estimate_damping(tone(40.0, lam=2.0, noise=0.01, seed=7), 40.0)
    assert est is None or est == pytest.approx(2.0, rel=0.25)
    est = estimate_damping(tone(40.0, lam=2.0, noise=0.01, seed=7), 40.0)
    assert est is None or est > 0.0


def test_peaks_carry_damping_estimates():
    peaks = top_peaks(tone(40.0, lam=2.0), count=1)
    assert peaks[0].damping_rate == pytest.approx(2.0, rel=0.05)
    bare = top_peaks(tone(40.0, lam=2.0), count=1, with_damping=False)
    assert bare[0].damping_rate is None
