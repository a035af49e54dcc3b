"""Synthetic measurement generator for the damped oscillator.

Simulates x'' + a x' + b x = b * force_scale * f(t) under a prescribed force
profile, samples the position, and adds seeded gaussian noise plus optional
additive ringdown transients on the measured channel. The truth force is
returned alongside so estimators can be scored against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepSizeUnstable
from .rng import SplitMix64
from .statespace import ComplexFrequency, OscillatorParams, characteristic_root
from .timeseries import TimeSeries

PROFILE_KINDS = ("pulse", "step", "multi-pulse", "zero")

# Internal integrator substeps per sample interval.
_SUBSTEPS = 10


@dataclass(frozen=True)
class ForceProfile:
    """Rectangular force shapes; pulse intervals are half-open [t0, t1)."""

    kind: str
    t0: float = 0.0
    t1: float = 0.0
    amplitude: float = 0.0
    pulses: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "pulse" and not (self.t1 > self.t0):
            raise ValueError(f"pulse needs t1 > t0, got [{self.t0}, {self.t1})")
        if self.kind == "multi-pulse":
            if not self.pulses:
                raise ValueError("multi-pulse needs at least one (t0, t1, amplitude) entry")
            clean = []
            for entry in self.pulses:
                t0, t1, amp = (float(v) for v in entry)
                if not (t1 > t0):
                    raise ValueError(f"pulse needs t1 > t0, got [{t0}, {t1})")
                clean.append((t0, t1, amp))
            object.__setattr__(self, "pulses", tuple(clean))

    def force_at(self, t: float) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "step":
            return self.amplitude if t >= self.t0 else 0.0
        if self.kind == "pulse":
            return self.amplitude if self.t0 <= t < self.t1 else 0.0
        total = 0.0
        for t0, t1, amp in self.pulses:
            if t0 <= t < t1:
                total += amp
        return total


@dataclass(frozen=True)
class Transient:
    """Additive ringdown amp * e^(-damping_rate*(t-start)) * sin(2 pi freq (t-start))."""

    freq_hz: float
    amplitude: float
    damping_rate: float = 0.0
    start: float = 0.0

    def __post_init__(self):
        if self.freq_hz <= 0.0:
            raise ValueError(f"transient frequency must be positive, got {self.freq_hz}")
        if self.damping_rate < 0.0:
            raise ValueError(f"transient damping must be non-negative, got {self.damping_rate}")


@dataclass(frozen=True)
class SimConfig:
    params: OscillatorParams
    profile: ForceProfile
    dt: float
    duration: float
    noise_sigma: float = 0.0
    seed: int = 0
    transients: tuple[Transient, ...] = ()
    x0: float = 0.0
    v0: float = 0.0

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.duration < 10.0 * self.dt:
            raise ValueError(
                f"duration must cover at least 10 samples, got {self.duration} at dt={self.dt}")
        if self.noise_sigma < 0.0:
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")
        object.__setattr__(self, "transients", tuple(self.transients))


def characteristic_ring(params: OscillatorParams) -> ComplexFrequency:
    """Observable ring of the oscillator; raises Overdamped for real roots."""
    return characteristic_root(params)


def _rk4_maps(a: float, b: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """One-substep affine map (M, N): y <- M y + N g for constant forcing g.

    Classical RK4 applied to the linear system y' = A y + g collapses to
    these fixed matrices, so the inner loop is nine scalar multiplies.
    """
    A = np.array([[0.0, 1.0], [-b, -a]])
    hA = h * A
    M = np.eye(2)
    term = np.eye(2)
    for k in range(1, 5):
        term = term @ hA / k
        M = M + term
    N = h * (np.eye(2) + hA / 2.0 + hA @ hA / 6.0 + hA @ hA @ hA / 24.0)
    return M, N


def simulate(cfg: SimConfig) -> tuple[TimeSeries, TimeSeries]:
    """Integrate the oscillator; returns (measured, truth_force).

    The force is sampled at each internal substep start and held constant
    across that substep, so sample-grid-aligned pulse edges are exact.
    """
    if cfg.dt > 0.1 / math.sqrt(cfg.params.b):
        raise StepSizeUnstable(
            f"dt={cfg.dt} too coarse for b={cfg.params.b}; need dt <= {0.1 / math.sqrt(cfg.params.b):.3e}")
    n = int(math.floor(cfg.duration / cfg.dt + 1e-9)) + 1
    h = cfg.dt / _SUBSTEPS
    M, N = _rk4_maps(cfg.params.a, cfg.params.b, h)
    m00, m01 = M[0]
    m10, m11 = M[1]
    drive = cfg.params.b * cfg.params.force_scale
    q0 = N[0, 1] * drive
    q1 = N[1, 1] * drive

    force_at = cfg.profile.force_at
    x = float(cfg.x0)
    v = float(cfg.v0)
    positions = np.empty(n)
    truth = np.empty(n)
    for i in range(n):
        t_i = i * cfg.dt
        positions[i] = x
        truth[i] = force_at(t_i)
        for k in range(_SUBSTEPS):
            f = force_at(t_i + k * h)
            x, v = m00 * x + m01 * v + q0 * f, m10 * x + m11 * v + q1 * f

    measured = positions
    if cfg.transients:
        t = cfg.dt * np.arange(n)
        for tr in cfg.transients:
            rel = t - tr.start
            mask = rel >= 0.0
            measured = measured + np.where(
                mask,
                tr.amplitude * np.exp(-tr.damping_rate * np.maximum(rel, 0.0))
                * np.sin(2.0 * math.pi * tr.freq_hz * rel),
                0.0)
    if cfg.noise_sigma > 0.0:
        rng = SplitMix64(cfg.seed)
        measured = measured + cfg.noise_sigma * np.asarray(rng.gaussians(n))

    return (TimeSeries(dt=cfg.dt, values=measured),
            TimeSeries(dt=cfg.dt, values=truth))


def sim_config_to_dict(cfg: SimConfig) -> dict:
    return {
        "params": {"a": cfg.params.a, "b": cfg.params.b,
                   "force_scale": cfg.params.force_scale},
        "profile": {"kind": cfg.profile.kind, "t0": cfg.profile.t0,
                    "t1": cfg.profile.t1, "amplitude": cfg.profile.amplitude,
                    "pulses": [list(p) for p in cfg.profile.pulses]},
        "dt": cfg.dt,
        "duration": cfg.duration,
        "noise_sigma": cfg.noise_sigma,
        "seed": cfg.seed,
        "transients": [{"freq_hz": tr.freq_hz, "amplitude": tr.amplitude,
                        "damping_rate": tr.damping_rate, "start": tr.start}
                       for tr in cfg.transients],
        "x0": cfg.x0,
        "v0": cfg.v0,
    }


def sim_config_from_dict(obj: dict) -> SimConfig:
    p = obj["params"]
    prof = obj["profile"]
    return SimConfig(
        params=OscillatorParams(a=float(p["a"]), b=float(p["b"]),
                                force_scale=float(p.get("force_scale", 1.0))),
        profile=ForceProfile(
            kind=str(prof["kind"]),
            t0=float(prof.get("t0", 0.0)),
            t1=float(prof.get("t1", 0.0)),
            amplitude=float(prof.get("amplitude", 0.0)),
            pulses=tuple(tuple(float(v) for v in entry)
                         for entry in prof.get("pulses", []))),
        dt=float(obj["dt"]),
        duration=float(obj["duration"]),
        noise_sigma=float(obj.get("noise_sigma", 0.0)),
        seed=int(obj.get("seed", 0)),
        transients=tuple(Transient(freq_hz=float(tr["freq_hz"]),
                                   amplitude=float(tr["amplitude"]),
                                   damping_rate=float(tr.get("damping_rate", 0.0)),
                                   start=float(tr.get("start", 0.0)))
                         for tr in obj.get("transients", [])),
        x0=float(obj.get("x0", 0.0)),
        v0=float(obj.get("v0", 0.0)),
    )
