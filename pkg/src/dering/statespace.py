"""Damped-oscillator state model and its exact discretization.

The state is (x, v, f): position, velocity, and the driving force treated
as constant between samples. The continuous generator

    d/dt (x, v, f) = [[0, 1, 0], [-b, -a, b*force_scale], [0, 0, 0]] @ (x, v, f)

is calibrated so that a static force produces x = force_scale * f. With the
default force_scale = 1 the position readout and the force share units,
which is the natural convention for a sensor whose deflection is reported
in force units; force_scale = 1/b recovers the textbook x'' + a x' + b x = f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Overdamped


@dataclass(frozen=True)
class OscillatorParams:
    """Coefficients of x'' + a x' + b x = 0 plus an output calibration factor."""

    a: float
    b: float
    force_scale: float = 1.0

    def __post_init__(self):
        if not (self.b > 0.0) or not math.isfinite(self.b):
            raise ValueError(f"b must be positive and finite, got {self.b}")
        if self.a < 0.0 or not math.isfinite(self.a):
            raise ValueError(f"a must be non-negative and finite, got {self.a}")
        if self.force_scale == 0.0 or not math.isfinite(self.force_scale):
            raise ValueError(f"force_scale must be non-zero and finite, got {self.force_scale}")

    @property
    def underdamped(self) -> bool:
        return 0.25 * self.a * self.a < self.b


@dataclass(frozen=True)
class ComplexFrequency:
    """Ringdown e^(-damping_rate * t) * sin(2 pi freq_hz * t) in observable units."""

    freq_hz: float
    damping_rate: float = 0.0

    def __post_init__(self):
        if not (self.freq_hz > 0.0) or not math.isfinite(self.freq_hz):
            raise ValueError(f"freq_hz must be positive and finite, got {self.freq_hz}")
        if self.damping_rate < 0.0 or not math.isfinite(self.damping_rate):
            raise ValueError(f"damping_rate must be non-negative and finite, got {self.damping_rate}")


@dataclass(frozen=True)
class ContinuousModel:
    """Continuous-time generator with the fixed (x, v, f) state ordering."""

    A: np.ndarray

    def __post_init__(self):
        mat = np.array(self.A, dtype=float, copy=True)
        if mat.shape != (3, 3):
            raise ValueError(f"A must be 3x3, got {mat.shape}")
        mat.flags.writeable = False
        object.__setattr__(self, "A", mat)


@dataclass(frozen=True)
class KalmanModel:
    """Everything the discrete filter needs: transition, readout, and noise."""

    phi: np.ndarray
    Q: np.ndarray
    R: float
    dt: float
    H: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float, copy=True)
        Q = np.array(self.Q, dtype=float, copy=True)
        if phi.shape != (3, 3) or Q.shape != (3, 3):
            raise ValueError("phi and Q must be 3x3")
        if np.any(np.diag(Q) < 0.0) or np.any(Q != np.diag(np.diag(Q))):
            raise ValueError("Q must be diagonal with non-negative entries")
        if not (self.R > 0.0):
            raise ValueError(f"R must be positive, got {self.R}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if np.linalg.det(phi) <= 0.0:
            raise ValueError("phi must have positive determinant")
        H = np.array([1.0, 0.0, 0.0])
        for m in (phi, Q, H):
            m.flags.writeable = False
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "H", H)


def from_complex_root(omega: ComplexFrequency, force_scale: float = 1.0) -> OscillatorParams:
    """Oscillator coefficients whose characteristic roots match the observed ring.

    The roots of s^2 + a s + b = 0 are -a/2 +- i sqrt(b - a^2/4), so
    a = 2 * damping_rate and b = (2 pi freq_hz)^2 + a^2/4.
    """
    a = 2.0 * omega.damping_rate
    b = (2.0 * math.pi * omega.freq_hz) ** 2 + 0.25 * a * a
    return OscillatorParams(a=a, b=b, force_scale=force_scale)


def characteristic_root(params: OscillatorParams) -> ComplexFrequency:
    """Inverse of from_complex_root. Raises Overdamped when nothing rings."""
    disc = params.b - 0.25 * params.a * params.a
    if disc <= 0.0:
        raise Overdamped(
            f"a={params.a}, b={params.b}: characteristic roots are real, no oscillation")
    return ComplexFrequency(freq_hz=math.sqrt(disc) / (2.0 * math.pi),
                            damping_rate=0.5 * params.a)


def continuous_model(params: OscillatorParams) -> ContinuousModel:
    return ContinuousModel(A=np.array([
        [0.0, 1.0, 0.0],
        [-params.b, -params.a, params.b * params.force_scale],
        [0.0, 0.0, 0.0],
    ]))


def discretize(model: ContinuousModel, dt: float) -> np.ndarray:
    """Exact transition matrix e^(A*dt); dt = 0 gives the identity."""
    if dt < 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be non-negative and finite, got {dt}")
    if dt == 0.0:
        return np.eye(3)
    return expm(model.A * dt)


def build_noise(sigma_x2: float, sigma_f2: float,
                sigma_v2: float | None = None) -> tuple[np.ndarray, float]:
    """Diagonal system noise Q = diag(sx2, sx2, sf2) and measurement noise R = sx2.

    Both x and v share sigma_x2 by default; sigma_v2 overrides the velocity
    entry for callers that want distinct units there.
    """
    if not (sigma_x2 > 0.0):
        raise ValueError(f"sigma_x2 must be positive, got {sigma_x2}")
    if not (sigma_f2 > 0.0):
        raise ValueError(f"sigma_f2 must be positive, got {sigma_f2}")
    v_entry = sigma_x2 if sigma_v2 is None else sigma_v2
    if v_entry < 0.0:
        raise ValueError(f"sigma_v2 must be non-negative, got {sigma_v2}")
    return np.diag([sigma_x2, v_entry, sigma_f2]), sigma_x2


def kalman_model(params: OscillatorParams, dt: float, sigma_x2: float,
                 sigma_f2: float, sigma_v2: float | None = None) -> KalmanModel:
    """Assemble the discrete model: phi = e^(A*dt), Q and R from the variances."""
    if not (dt > 0.0):
        raise ValueError(f"dt must be positive, got {dt}")
    Q, R = build_noise(sigma_x2, sigma_f2, sigma_v2)
    phi = discretize(continuous_model(params), dt)
    return KalmanModel(phi=phi, Q=Q, R=R, dt=dt)


# Fixed series order for the scaled exponential. With the norm squeezed
# below 1/2 the order-16 remainder is ~0.5^17/17! < 1e-19, beyond double
# precision, so no run-time error control is needed.
_TAYLOR_ORDER = 16


def expm(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential via scaling-and-squaring around a fixed-order series."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    norm = float(np.linalg.norm(mat, ord=np.inf))
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    scaled = mat / (2.0 ** squarings)
    out = np.eye(mat.shape[0])
    term = np.eye(mat.shape[0])
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ scaled / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out
