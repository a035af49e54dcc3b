"""Numeric frequency response of configured filters.

The steady-gain filter is a fixed linear recursion, so its response is
measured the way one would probe hardware: drive with a unit sinusoid,
wait out the filter's own transient, then correlate the force output
against sin/cos at the drive frequency. The same driver doubles as a
response probe for stage cascades and the moving-average smoother.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import NyquistViolation
from .kalman import steady_state_gain
from .statespace import KalmanModel

MIN_CYCLES = 10

# Near-marginal filters (undamped stage, tiny force variance) would ask for
# an absurd settle prefix; past this many samples the leftover transient is
# below measurement resolution anyway.
_MAX_SETTLE_SAMPLES = 2_000_000


@dataclass(frozen=True)
class ResponsePoint:
    freq_hz: float
    gain: float
    phase_deg: float | None = None

    def __post_init__(self):
        if self.gain < 0.0:
            raise ValueError(f"gain must be non-negative, got {self.gain}")


def force_transfer(model: KalmanModel) -> tuple[np.ndarray, np.ndarray, float]:
    """Transfer function (num, den) from measurement to force estimate.

    The fixed-gain recursion s_k = (I - K H) phi s_{k-1} + K z_k with output
    f_k = e3' s_k is a standard state-space system once the state is taken
    one step behind; also returns the slowest closed-loop decay rate in 1/s.
    """
    K = steady_state_gain(model).K
    closed = model.phi.copy()
    closed -= np.outer(K, model.phi[0])  # (I - K H) phi with H = e1'
    e3 = np.array([0.0, 0.0, 1.0])
    num, den = scipy.signal.ss2tf(closed, K.reshape(3, 1),
                                  (e3 @ closed).reshape(1, 3),
                                  np.array([[K[2]]]))
    radius = float(np.max(np.abs(np.linalg.eigvals(closed))))
    decay = -math.log(min(radius, 1.0 - 1e-12)) / model.dt
    return num[0], den, decay


def _drive_and_fit(transfers, freq_hz: float, dt: float, cycles: int,
                   settle_seconds: float, amplitude: float = 1.0) -> tuple[float, float]:
    """Chain a sinusoid through digital filters; return (gain, phase_deg)."""
    n_settle = min(int(math.ceil(settle_seconds / dt)), _MAX_SETTLE_SAMPLES)
    n_meas = int(math.ceil(cycles / (freq_hz * dt)))
    t = dt * np.arange(n_settle + n_meas)
    signal = amplitude * np.sin(2.0 * math.pi * freq_hz * t)
    for num, den in transfers:
        signal = scipy.signal.lfilter(num, den, signal)
    tail_t = t[n_settle:]
    tail = signal[n_settle:]
    basis = np.column_stack([np.sin(2.0 * math.pi * freq_hz * tail_t),
                             np.cos(2.0 * math.pi * freq_hz * tail_t),
                             np.ones_like(tail_t)])
    coef, *_ = np.linalg.lstsq(basis, tail, rcond=None)
    gain = float(math.hypot(coef[0], coef[1])) / amplitude
    phase = math.degrees(math.atan2(coef[1], coef[0]))
    return gain, phase


def _check_drive_freqs(freqs, nyquist: float) -> list[float]:
    out = sorted(float(f) for f in freqs)
    for f in out:
        if not (f > 0.0):
            raise ValueError(f"drive frequency must be positive, got {f}")
        if f >= nyquist:
            raise NyquistViolation(
                f"drive frequency {f} Hz is at or above Nyquist {nyquist} Hz")
    return out


def cascade_response(models: "list[KalmanModel]", freqs: "list[float] | np.ndarray",
                     cycles: int = 20) -> list[ResponsePoint]:
    """Response of stages applied in sequence (drive -> stage 1 -> ... -> out).

    Points come back sorted by frequency regardless of input order.
    """
    if not models:
        raise ValueError("need at least one stage model")
    if cycles < MIN_CYCLES:
        raise ValueError(f"cycles must be at least {MIN_CYCLES}, got {cycles}")
    dt = models[0].dt
    for m in models[1:]:
        if abs(m.dt - dt) > 1e-9 * dt:
            raise ValueError("all stages must share one sample interval")
    freqs = _check_drive_freqs(freqs, 0.5 / dt)
    transfers = [force_transfer(m) for m in models]
    decay = min(t[2] for t in transfers)
    chain = [(num, den) for num, den, _ in transfers]
    points = []
    for f in freqs:
        settle = max(5.0 / f, 5.0 / decay)
        gain, phase = _drive_and_fit(chain, f, dt, cycles, settle)
        points.append(ResponsePoint(freq_hz=f, gain=gain, phase_deg=phase))
    return points


def frequency_response(model: KalmanModel, freqs: "list[float] | np.ndarray",
                       cycles: int = 20) -> list[ResponsePoint]:
    """Measured gain/phase of a single filter's force output per drive frequency."""
    return cascade_response([model], freqs, cycles)


def moving_average_response(window: int, dt: float, freqs: "list[float] | np.ndarray",
                            cycles: int = 20) -> list[ResponsePoint]:
    """Same driver pointed at the trailing moving average of `window` samples."""
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    if cycles < MIN_CYCLES:
        raise ValueError(f"cycles must be at least {MIN_CYCLES}, got {cycles}")
    chain = [(np.full(window, 1.0 / window), np.array([1.0]))]
    points = []
    for f in _check_drive_freqs(freqs, 0.5 / dt):
        settle = max(5.0 / f, 2.0 * window * dt)
        gain, phase = _drive_and_fit(chain, f, dt, cycles, settle)
        points.append(ResponsePoint(freq_hz=f, gain=gain, phase_deg=phase))
    return points


def default_grid(dt: float, count: int = 200) -> np.ndarray:
    """Log-spaced probe grid from 0.1 Hz to 90% of Nyquist."""
    hi = 0.9 * 0.5 / dt
    if hi <= 0.1:
        raise ValueError(f"dt={dt} leaves no usable band above 0.1 Hz")
    return np.geomspace(0.1, hi, count)
