"""Transient removal pipeline: filter stages, cascading, and smoothing.

A stage is one steady-gain filter tuned to one transient frequency; its
output is the force channel of the state estimate. Several transients are
removed by running the stages in sequence, each treating the previous
stage's force output as its measured signal. A trailing moving average is
available as a final polish for leftover measurement noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NyquistViolation
from .kalman import FIXED_GAIN, FilterRunResult, run
from .statespace import ComplexFrequency, KalmanModel, from_complex_root, kalman_model
from .timeseries import TimeSeries


@dataclass(frozen=True)
class FilterStageConfig:
    """One transient to remove: its ring and the two noise variances."""

    omega: ComplexFrequency
    sigma_x2: float
    sigma_f2: float

    def __post_init__(self):
        if not (self.sigma_x2 > 0.0):
            raise ValueError(f"sigma_x2 must be positive, got {self.sigma_x2}")
        if not (self.sigma_f2 > 0.0):
            raise ValueError(f"sigma_f2 must be positive, got {self.sigma_f2}")


@dataclass(frozen=True)
class FilterChainConfig:
    stages: tuple[FilterStageConfig, ...]
    dt: float
    post_smooth: int = 0

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages:
            raise ValueError("chain needs at least one stage")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.post_smooth < 0:
            raise ValueError(f"post_smooth must be non-negative, got {self.post_smooth}")
        object.__setattr__(self, "stages", stages)


@dataclass(frozen=True)
class StageReport:
    """Where a stage's output is still settling, and the gain it used."""

    freq_hz: float
    damping_rate: float
    sigma_f2: float
    settle_samples: int
    gain: tuple[float, float, float]


def make_stage(cfg: FilterStageConfig, dt: float) -> KalmanModel:
    """Discrete filter model for one stage; rejects frequencies the grid cannot carry."""
    if not (dt > 0.0):
        raise ValueError(f"dt must be positive, got {dt}")
    nyquist = 0.5 / dt
    if cfg.omega.freq_hz >= nyquist:
        raise NyquistViolation(
            f"stage frequency {cfg.omega.freq_hz} Hz is at or above the "
            f"Nyquist limit {nyquist} Hz of dt={dt}")
    params = from_complex_root(cfg.omega)
    return kalman_model(params, dt, cfg.sigma_x2, cfg.sigma_f2)


def extract_force(result: FilterRunResult) -> TimeSeries:
    """Force channel of a filter run, on the input's time grid."""
    t0 = result.series.t0 if result.series is not None else 0.0
    units = result.series.units if result.series is not None else ""
    return TimeSeries(dt=result.model.dt, values=result.force(), t0=t0, units=units)


def settle_samples(cfg: FilterStageConfig, dt: float) -> int:
    """Samples to distrust at a stage's start while its estimate converges.

    Three decay times of the transient being removed; for an undamped
    stage, ten periods of its frequency instead.
    """
    lam = cfg.omega.damping_rate
    if lam > 0.0:
        return int(math.ceil(3.0 / (lam * dt)))
    return int(math.ceil(10.0 / (cfg.omega.freq_hz * dt)))


def cascade_report(series: TimeSeries, chain: FilterChainConfig) -> tuple[TimeSeries, list[StageReport]]:
    """Run the full chain, returning the output plus per-stage settle markers."""
    if abs(series.dt - chain.dt) > 1e-9 * chain.dt:
        raise ValueError(
            f"series dt {series.dt!r} does not match chain dt {chain.dt!r}")
    current = series
    reports: list[StageReport] = []
    for cfg in chain.stages:
        model = make_stage(cfg, chain.dt)
        result = run(current, model, mode=FIXED_GAIN)
        current = extract_force(result)
        reports.append(StageReport(
            freq_hz=cfg.omega.freq_hz,
            damping_rate=cfg.omega.damping_rate,
            sigma_f2=cfg.sigma_f2,
            settle_samples=min(settle_samples(cfg, chain.dt), len(series)),
            gain=tuple(float(k) for k in result.gain.K)))
    if chain.post_smooth > 1:
        current = moving_average(current, chain.post_smooth)
    return current, reports


def cascade(series: TimeSeries, chain: FilterChainConfig) -> TimeSeries:
    """Remove every configured transient in turn; smooth last if asked."""
    out, _ = cascade_report(series, chain)
    return out


def moving_average(series: TimeSeries, window: int) -> TimeSeries:
    """Trailing average over `window` samples; the prefix averages what exists."""
    n = len(series)
    if not (1 <= window <= n):
        raise ValueError(f"window must be in [1, {n}], got {window}")
    if window == 1:
        return series
    cs = np.concatenate([[0.0], np.cumsum(series.values)])
    counts = np.minimum(np.arange(1, n + 1), window)
    start = np.arange(1, n + 1) - counts
    out = (cs[1:] - cs[start]) / counts
    return series.with_values(out)


def chain_to_dict(chain: FilterChainConfig) -> dict:
    return {
        "dt": chain.dt,
        "post_smooth": chain.post_smooth,
        "stages": [{
            "freq_hz": s.omega.freq_hz,
            "damping_rate": s.omega.damping_rate,
            "sigma_x2": s.sigma_x2,
            "sigma_f2": s.sigma_f2,
        } for s in chain.stages],
    }


def chain_from_dict(obj: dict) -> FilterChainConfig:
    stages = tuple(
        FilterStageConfig(
            omega=ComplexFrequency(freq_hz=float(s["freq_hz"]),
                                   damping_rate=float(s.get("damping_rate", 0.0))),
            sigma_x2=float(s["sigma_x2"]),
            sigma_f2=float(s["sigma_f2"]))
        for s in obj["stages"])
    return FilterChainConfig(stages=stages, dt=float(obj["dt"]),
                             post_smooth=int(obj.get("post_smooth", 0)))
