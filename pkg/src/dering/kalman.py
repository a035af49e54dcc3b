"""Discrete Kalman filter over the 3-state oscillator model.

Covariance updates use the symmetrized Joseph form throughout so the
estimate covariance stays symmetric positive semidefinite under roundoff.
The steady-state gain is the fixed point of the covariance recursion; it is
warm-started from a Riccati solve and then polished with the exact
predict/update iteration until the gain stops moving, so the returned value
is always a genuine iterate of the recursion it claims to be a limit of.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonConvergence
from .statespace import KalmanModel
from .timeseries import TimeSeries

FIXED_GAIN = "fixed-gain"
TIME_VARYING = "time-varying"

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1_000_000

_EYE3 = np.eye(3)


@dataclass(frozen=True)
class FilterState:
    """State estimate s = (x, v, f) with its covariance."""

    s: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=float, copy=True).reshape(3)
        P = np.array(self.P, dtype=float, copy=True)
        if P.shape != (3, 3):
            raise ValueError(f"covariance must be 3x3, got {P.shape}")
        scale = float(np.max(np.abs(P)))
        if scale > 0.0 and float(np.max(np.abs(P - P.T))) > 1e-12 * scale:
            raise ValueError("covariance must be symmetric")
        s.flags.writeable = False
        P.flags.writeable = False
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "P", P)


@dataclass(frozen=True)
class GainMatrix:
    """Gain column for the scalar position measurement."""

    K: np.ndarray

    def __post_init__(self):
        K = np.array(self.K, dtype=float, copy=True).reshape(3)
        if not (-1e-9 <= K[0] <= 1.0 + 1e-9):
            raise ValueError(f"measured-channel gain must lie in [0, 1], got {K[0]}")
        K.flags.writeable = False
        object.__setattr__(self, "K", K)


class StateSequence(Sequence):
    """Per-sample FilterState view backed by compact arrays.

    Fixed-gain runs share one converged covariance across all samples, so
    states are materialized lazily instead of storing n copies of it.
    """

    def __init__(self, s: np.ndarray, P: np.ndarray):
        self._s = s
        self._P = P  # (3,3) shared across samples, or (n,3,3)

    def __len__(self) -> int:
        return int(self._s.shape[0])

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            P = self._P if self._P.ndim == 2 else self._P[idx]
            return StateSequence(self._s[idx], P)
        P = self._P if self._P.ndim == 2 else self._P[idx]
        return FilterState(s=self._s[idx], P=P)


@dataclass(frozen=True)
class FilterRunResult:
    """Post-update states for every input sample plus the gain(s) used."""

    states: StateSequence
    model: KalmanModel
    mode: str
    gain: GainMatrix | None = None       # fixed-gain mode
    gains: np.ndarray | None = None      # time-varying mode, one row per step
    series: TimeSeries | None = None     # the filtered input, for grid metadata

    def states_matrix(self) -> np.ndarray:
        """All estimates as an (n, 3) array with columns (x, v, f)."""
        return self.states._s

    def force(self) -> np.ndarray:
        """The deconvolved force estimate, one value per input sample."""
        return self.states._s[:, 2]


def predict(state: FilterState, model: KalmanModel) -> FilterState:
    """Propagate the estimate one sample ahead: s <- phi s, P <- phi P phi' + Q."""
    s = model.phi @ state.s
    P = model.phi @ state.P @ model.phi.T + model.Q
    return FilterState(s=s, P=0.5 * (P + P.T))


def update(state: FilterState, z: float, model: KalmanModel) -> tuple[FilterState, GainMatrix]:
    """Blend the position measurement z into the estimate."""
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"measurement must be finite, got {z}")
    K = state.P[:, 0] / (state.P[0, 0] + model.R)
    s = state.s + K * (z - state.s[0])
    return FilterState(s=s, P=_joseph(state.P, K, model.R)), GainMatrix(K=K)


def _joseph(P: np.ndarray, K: np.ndarray, R: float) -> np.ndarray:
    # (I - K H) P (I - K H)' + R K K' with H = (1, 0, 0)
    ImKH = _EYE3.copy()
    ImKH[:, 0] -= K
    out = ImKH @ P @ ImKH.T + R * np.outer(K, K)
    return 0.5 * (out + out.T)


def _riccati_warm_start(model: KalmanModel) -> np.ndarray | None:
    try:
        X = scipy.linalg.solve_discrete_are(
            model.phi.T, model.H.reshape(3, 1), model.Q, np.array([[model.R]]))
    except (np.linalg.LinAlgError, ValueError):
        return None
    if not np.all(np.isfinite(X)):
        return None
    return 0.5 * (X + X.T)


def _steady_state(model: KalmanModel, tol: float,
                  max_iter: int) -> tuple[GainMatrix, np.ndarray]:
    """Converged (gain, post-update covariance) of the filter recursion."""
    P_pred = _riccati_warm_start(model)
    if P_pred is None:
        P0 = np.diag([model.R, 1e3 * model.R, 1e3 * model.Q[2, 2]])
        P_pred = model.phi @ P0 @ model.phi.T + model.Q
    K_prev = None
    residual = math.inf
    for _ in range(max_iter):
        K = P_pred[:, 0] / (P_pred[0, 0] + model.R)
        P_post = _joseph(P_pred, K, model.R)
        if K_prev is not None:
            residual = float(np.linalg.norm(K - K_prev))
            if residual <= tol * float(np.linalg.norm(K)):
                return GainMatrix(K=K), P_post
        K_prev = K
        P_pred = model.phi @ P_post @ model.phi.T + model.Q
        P_pred = 0.5 * (P_pred + P_pred.T)
    raise NonConvergence(
        f"gain iteration did not converge within {max_iter} steps",
        last_gain=K_prev, residual=residual)


def steady_state_gain(model: KalmanModel, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> GainMatrix:
    """Converged gain of the covariance recursion, suitable for hard-wiring."""
    if not (tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 2:
        raise ValueError(f"max_iter must allow at least two iterates, got {max_iter}")
    gain, _ = _steady_state(model, tol, max_iter)
    return gain


def default_init(z0: float, model: KalmanModel) -> FilterState:
    """First-measurement start: position and pseudostatic force from z0.

    The covariance is broad on the unmeasured channels so the recursion
    forgets this guess within a few periods.
    """
    return FilterState(
        s=(float(z0), 0.0, float(z0)),
        P=np.diag([model.R, 1e3 * model.R, 1e3 * model.Q[2, 2]]))


def run(series: TimeSeries, model: KalmanModel, mode: str = FIXED_GAIN,
        init: FilterState | None = None) -> FilterRunResult:
    """Filter a measured series; returns one post-update state per sample."""
    if abs(series.dt - model.dt) > 1e-9 * model.dt:
        raise ValueError(
            f"series dt {series.dt!r} does not match model dt {model.dt!r}")
    z = series.values
    if init is None:
        init = default_init(z[0], model)
    if mode == FIXED_GAIN:
        return _run_fixed(series, model, init)
    if mode == TIME_VARYING:
        return _run_varying(series, model, init)
    raise ValueError(f"unknown mode {mode!r}")


def _run_fixed(series: TimeSeries, model: KalmanModel, init: FilterState) -> FilterRunResult:
    z = series.values
    gain, P_post = _steady_state(model, DEFAULT_TOL, DEFAULT_MAX_ITER)
    # Scalar recursion: 3x3 matrix work per sample is all constants, so the
    # loop runs on plain floats.
    p00, p01, p02, p10, p11, p12, p20, p21, p22 = (float(c) for c in model.phi.ravel())
    k0, k1, k2 = (float(c) for c in gain.K)
    x, v, f = (float(c) for c in init.s)
    xs: list[float] = []
    vs: list[float] = []
    fs: list[float] = []
    for zi in z.tolist():
        xp = p00 * x + p01 * v + p02 * f
        vp = p10 * x + p11 * v + p12 * f
        fp = p20 * x + p21 * v + p22 * f
        y = zi - xp
        x = xp + k0 * y
        v = vp + k1 * y
        f = fp + k2 * y
        xs.append(x)
        vs.append(v)
        fs.append(f)
    s = np.column_stack([xs, vs, fs])
    s.flags.writeable = False
    P = P_post.copy()
    P.flags.writeable = False
    return FilterRunResult(states=StateSequence(s, P), model=model,
                           mode=FIXED_GAIN, gain=gain, series=series)


def _run_varying(series: TimeSeries, model: KalmanModel, init: FilterState) -> FilterRunResult:
    z = series.values
    n = z.size
    s = np.empty((n, 3))
    P_all = np.empty((n, 3, 3))
    K_all = np.empty((n, 3))
    sv = init.s.copy()
    P = init.P.copy()
    phi, Q, R = model.phi, model.Q, model.R
    for i in range(n):
        sv = phi @ sv
        P = phi @ P @ phi.T + Q
        K = P[:, 0] / (P[0, 0] + R)
        sv = sv + K * (z[i] - sv[0])
        P = _joseph(P, K, R)
        s[i] = sv
        P_all[i] = P
        K_all[i] = K
    for arr in (s, P_all, K_all):
        arr.flags.writeable = False
    return FilterRunResult(states=StateSequence(s, P_all), model=model,
                           mode=TIME_VARYING, gains=K_all, series=series)
