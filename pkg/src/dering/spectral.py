"""Spectral peak detection and damping estimation.

The periodogram uses a Hann window after mean removal and renormalizes the
one-sided power so it sums exactly to the mean-removed signal energy; that
keeps relative peak heights comparable across record lengths while the
total stays physical.

Damping is read off the half-power width of the peak. Window leakage
broadens every peak, so instead of the textbook lambda = pi * width the
measured width is inverted against reference widths obtained by pushing
synthetic ringdowns e^(-lambda t) sin(2 pi f t) on the same grid through
the same pipeline. An undamped tone then lands at lambda = 0 by
construction rather than at the window's own bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoPeak
from .timeseries import TimeSeries

MIN_SAMPLES = 16

# Peaks below this multiple of the median power are considered noise wiggles.
_FLATNESS_RATIO = 10.0


@dataclass(frozen=True)
class Spectrum:
    freqs_hz: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        f = np.array(self.freqs_hz, dtype=float, copy=True)
        p = np.array(self.power, dtype=float, copy=True)
        if f.shape != p.shape or f.ndim != 1:
            raise ValueError("freqs_hz and power must be 1-d arrays of equal length")
        if f.size >= 2 and np.any(np.diff(f) <= 0.0):
            raise ValueError("frequency grid must be strictly ascending")
        if np.any(p < 0.0):
            raise ValueError("power must be non-negative")
        f.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "power", p)


@dataclass(frozen=True)
class SpectralPeak:
    freq_hz: float
    power: float
    damping_rate: float | None = None


def periodogram(series: TimeSeries) -> Spectrum:
    """One-sided Hann periodogram over (0, Nyquist], mean removed.

    Power is rescaled so sum(power) equals the mean-removed sample energy
    sum(x~^2); a constant series therefore comes back all zero.
    """
    n = len(series)
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    centered = series.values - float(np.mean(series.values))
    energy = float(np.sum(centered * centered))
    windowed = centered * np.hanning(n)
    spec = np.fft.rfft(windowed)
    raw = (spec.real ** 2 + spec.imag ** 2)[1:n // 2 + 1]
    total = float(np.sum(raw))
    power = raw * (energy / total) if total > 0.0 else np.zeros_like(raw)
    freqs = np.arange(1, n // 2 + 1) / (n * series.dt)
    return Spectrum(freqs_hz=freqs, power=power)


def _interior_peak_bins(power: np.ndarray) -> np.ndarray:
    """Indices of strict-or-plateau local maxima away from the grid edges."""
    if power.size < 3:
        return np.array([], dtype=int)
    inner = power[1:-1]
    mask = (inner >= power[:-2]) & (inner >= power[2:])
    return np.flatnonzero(mask) + 1


def _refine(freqs: np.ndarray, power: np.ndarray, k: int) -> tuple[float, float]:
    """Parabolic interpolation of a peak over bins k-1, k, k+1."""
    p_l, p_c, p_r = power[k - 1], power[k], power[k + 1]
    denom = p_l - 2.0 * p_c + p_r
    if denom >= 0.0:  # degenerate plateau, keep the bin itself
        return float(freqs[k]), float(p_c)
    shift = 0.5 * (p_l - p_r) / denom
    shift = float(np.clip(shift, -0.5, 0.5))
    df = freqs[1] - freqs[0] if freqs.size > 1 else 0.0
    return float(freqs[k] + shift * df), float(p_c - 0.25 * (p_l - p_r) * shift)


def top_peaks(series: TimeSeries, count: int = 5,
              with_damping: bool = True) -> list[SpectralPeak]:
    """Interior local maxima ranked by power, strongest first.

    Returns an empty list for flat spectra; dominant_frequency turns that
    into a NoPeak error.
    """
    spec = periodogram(series)
    power = spec.power
    peak_max = float(np.max(power)) if power.size else 0.0
    median = float(np.median(power)) if power.size else 0.0
    if peak_max <= 0.0 or peak_max < _FLATNESS_RATIO * median:
        return []
    bins = _interior_peak_bins(power)
    bins = bins[power[bins] >= _FLATNESS_RATIO * median]
    if bins.size == 0:
        return []
    # Stable ordering: descending power, then ascending frequency on ties.
    order = np.lexsort((bins, -power[bins]))
    peaks: list[SpectralPeak] = []
    for k in bins[order][:count]:
        freq, p = _refine(spec.freqs_hz, power, int(k))
        damping = estimate_damping(series, freq) if with_damping else None
        peaks.append(SpectralPeak(freq_hz=freq, power=p, damping_rate=damping))
    return peaks


def dominant_frequency(series: TimeSeries) -> SpectralPeak:
    """Strongest interior peak, parabolically refined between bins."""
    peaks = top_peaks(series, count=1)
    if not peaks:
        raise NoPeak("spectrum has no dominant peak (max power < "
                     f"{_FLATNESS_RATIO:g} x median)")
    return peaks[0]


def _half_power_width(spec: Spectrum, freq_hz: float) -> float | None:
    """Interpolated half-power bandwidth of the local peak nearest freq_hz."""
    freqs, power = spec.freqs_hz, spec.power
    if freqs.size < 3:
        return None
    k = int(np.argmin(np.abs(freqs - freq_hz)))
    # Walk uphill to the local summit so slightly-off freq requests still
    # measure the intended peak.
    while 0 < k < freqs.size - 1:
        if power[k + 1] > power[k]:
            k += 1
        elif power[k - 1] > power[k]:
            k -= 1
        else:
            break
    if k in (0, freqs.size - 1):
        return None
    peak = power[k]
    median = float(np.median(power))
    if peak <= 0.0 or peak < _FLATNESS_RATIO * median:
        return None
    half = 0.5 * peak

    def crossing(direction: int) -> float | None:
        j = k
        while 0 < j + direction < freqs.size:
            nxt = j + direction
            if power[nxt] > power[j]:  # climbed into a neighbouring peak
                return None
            if power[nxt] <= half:
                frac = (power[j] - half) / (power[j] - power[nxt])
                return float(freqs[j] + frac * (freqs[nxt] - freqs[j]))
            j = nxt
        return None

    left = crossing(-1)
    right = crossing(+1)
    if left is None or right is None:
        return None
    return right - left


def _reference_width(freq_hz: float, damping_rate: float, n: int, dt: float) -> float | None:
    """Half-power width the pipeline reports for a clean ringdown at (f, lambda)."""
    t = dt * np.arange(n)
    ref = TimeSeries(dt=dt, values=np.exp(-damping_rate * t)
                     * np.sin(2.0 * math.pi * freq_hz * t))
    return _half_power_width(periodogram(ref), freq_hz)


def estimate_damping(series: TimeSeries, freq_hz: float) -> float | None:
    """Decay rate of the transient at freq_hz, or None when unresolvable.

    Inverts the measured half-power width against reference ringdowns
    rendered through the identical window/grid, which cancels the
    window-broadening bias that a direct pi*width readout would carry.
    """
    n = len(series)
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    if not (0.0 < freq_hz < series.nyquist_hz):
        raise ValueError(f"freq_hz must lie in (0, Nyquist), got {freq_hz}")
    width = _half_power_width(periodogram(series), freq_hz)
    if width is None:
        return None
    base = _reference_width(freq_hz, 0.0, n, series.dt)
    if base is None:
        return None
    if width <= base:
        return 0.0
    # Bracket the decay rate, then bisect on the monotone width response.
    lam_hi = 1.0 / (n * series.dt)
    width_hi = None
    for _ in range(40):
        lam_hi *= 2.0
        width_hi = _reference_width(freq_hz, lam_hi, n, series.dt)
        if width_hi is None:
            return None
        if width_hi >= width:
            break
    else:
        return None
    lam_lo = 0.0
    for _ in range(50):
        lam_mid = 0.5 * (lam_lo + lam_hi)
        w_mid = _reference_width(freq_hz, lam_mid, n, series.dt)
        if w_mid is None:
            return None
        if w_mid < width:
            lam_lo = lam_mid
        else:
            lam_hi = lam_mid
        if lam_hi - lam_lo <= 1e-4 * max(lam_hi, 1e-12):
            break
    return 0.5 * (lam_lo + lam_hi)
