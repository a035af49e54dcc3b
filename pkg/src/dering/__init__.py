"""Kalman-filter deconvolution of oscillatory transients from force signals."""

from .errors import (DeringError, EmptyInput, NonConvergence, NonUniformSampling,
                     NoPeak, NyquistViolation, Overdamped, ParseError,
                     StepSizeUnstable)
from .statespace import (ComplexFrequency, ContinuousModel, KalmanModel,
                         OscillatorParams, build_noise, characteristic_root,
                         continuous_model, discretize, from_complex_root,
                         kalman_model)
from .kalman import (FIXED_GAIN, TIME_VARYING, FilterRunResult, FilterState,
                     GainMatrix, predict, run, steady_state_gain, update)
from .spectral import SpectralPeak, Spectrum, dominant_frequency, estimate_damping, periodogram, top_peaks
from .deconvolve import (FilterChainConfig, FilterStageConfig, cascade,
                         cascade_report, extract_force, make_stage,
                         moving_average)
from .response import (ResponsePoint, cascade_response, frequency_response,
                       moving_average_response)
from .synth import (ForceProfile, SimConfig, Transient, characteristic_ring,
                    simulate)
from .timeseries import RunManifest, TimeSeries, read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "DeringError", "EmptyInput", "NonConvergence", "NonUniformSampling",
    "NoPeak", "NyquistViolation", "Overdamped", "ParseError", "StepSizeUnstable",
    "ComplexFrequency", "ContinuousModel", "KalmanModel", "OscillatorParams",
    "build_noise", "characteristic_root", "continuous_model", "discretize",
    "from_complex_root", "kalman_model",
    "FIXED_GAIN", "TIME_VARYING", "FilterRunResult", "FilterState", "GainMatrix",
    "predict", "run", "steady_state_gain", "update",
    "SpectralPeak", "Spectrum", "dominant_frequency", "estimate_damping",
    "periodogram", "top_peaks",
    "FilterChainConfig", "FilterStageConfig", "cascade", "cascade_report",
    "extract_force", "make_stage", "moving_average",
    "ResponsePoint", "cascade_response", "frequency_response",
    "moving_average_response",
    "ForceProfile", "SimConfig", "Transient", "characteristic_ring", "simulate",
    "RunManifest", "TimeSeries", "read_csv", "write_csv",
    "__version__",
]
