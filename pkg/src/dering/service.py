"""Stateless HTTP facade over the spectral and deconvolution pipeline.

Every request carries (or references) its full input, so handlers are pure
functions of the request plus a read-only dataset directory; responses for
a given request never depend on request ordering. Errors are always
{"error": message, "code": short-tag} with 400/404 status.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import spectral
from .deconvolve import cascade_report, chain_from_dict
from .errors import (DeringError, EmptyInput, NonConvergence, NonUniformSampling,
                     NoPeak, NyquistViolation, Overdamped, ParseError,
                     StepSizeUnstable)
from .timeseries import TimeSeries, digest_file, read_csv

MAX_INLINE_SAMPLES = 10_000_000
MAX_SPECTRUM_BINS = 4096

_ERROR_CODES = [
    (ParseError, "parse"),
    (NonUniformSampling, "non_uniform"),
    (NoPeak, "no_peak"),
    (NyquistViolation, "nyquist"),
    (NonConvergence, "non_convergence"),
    (Overdamped, "overdamped"),
    (StepSizeUnstable, "step_size"),
    (EmptyInput, "empty"),
]


class _HttpError(Exception):
    def __init__(self, status: int, message: str, code: str):
        self.status = status
        self.message = message
        self.code = code


def _error_response(status: int, message: str, code: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, "code": code})


def _series_from_body(obj, where: str) -> TimeSeries:
    if not isinstance(obj, dict):
        raise _HttpError(400, f"{where} must be an object", "bad_request")
    try:
        values = obj["values"]
        if not isinstance(values, list):
            raise _HttpError(400, f"{where}.values must be an array", "bad_request")
        if len(values) > MAX_INLINE_SAMPLES:
            raise _HttpError(
                400, f"inline series capped at {MAX_INLINE_SAMPLES} samples; "
                "use a dataset reference", "too_large")
        return TimeSeries(
            dt=float(obj["dt"]),
            values=np.asarray(values, dtype=float),
            t0=float(obj.get("t0", 0.0)),
            units=str(obj.get("units", "")))
    except _HttpError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _HttpError(400, f"invalid {where}: {exc}", "bad_request")


def _series_to_body(series: TimeSeries) -> dict:
    return {
        "dt": series.dt,
        "t0": series.t0,
        "units": series.units,
        "values": [float(v) for v in series.values],
    }


def _sanitize_id(dataset_id: str) -> str:
    if (not dataset_id or "/" in dataset_id or "\\" in dataset_id
            or ".." in dataset_id or dataset_id.startswith(".")):
        raise _HttpError(400, f"invalid dataset id {dataset_id!r}", "bad_request")
    return dataset_id


def _downsample(spec: spectral.Spectrum, max_bins: int) -> tuple[list, list]:
    """Max-pool the power grid; each kept bin is its group's argmax, so peak
    frequencies and heights survive downsampling exactly."""
    n = spec.power.size
    if n <= max_bins:
        return spec.freqs_hz.tolist(), spec.power.tolist()
    freqs, power = [], []
    bounds = np.linspace(0, n, max_bins + 1).astype(int)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi <= lo:
            continue
        k = lo + int(np.argmax(spec.power[lo:hi]))
        freqs.append(float(spec.freqs_hz[k]))
        power.append(float(spec.power[k]))
    return freqs, power


def create_app(data_dir: "str | os.PathLike | None" = None) -> FastAPI:
    app = FastAPI(title="dering", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    root = Path(data_dir) if data_dir is not None else None

    def resolve_dataset(dataset_id: str) -> Path:
        name = _sanitize_id(dataset_id)
        if root is None:
            raise _HttpError(404, "no dataset directory configured", "not_found")
        for candidate in (root / name, root / f"{name}.csv"):
            if candidate.is_file():
                return candidate
        raise _HttpError(404, f"unknown dataset {dataset_id!r}", "not_found")

    def load_series(payload: dict) -> TimeSeries:
        if not isinstance(payload, dict):
            raise _HttpError(400, "body must be a JSON object", "bad_request")
        if "series" in payload:
            return _series_from_body(payload["series"], "series")
        if "dataset" in payload:
            return read_csv(resolve_dataset(str(payload["dataset"])))
        raise _HttpError(400, "body needs either 'series' or 'dataset'", "bad_request")

    @app.exception_handler(_HttpError)
    async def http_error(request: Request, exc: _HttpError):
        return _error_response(exc.status, exc.message, exc.code)

    @app.exception_handler(DeringError)
    async def dering_error(request: Request, exc: DeringError):
        for klass, code in _ERROR_CODES:
            if isinstance(exc, klass):
                return _error_response(400, str(exc), code)
        return _error_response(400, str(exc), "error")

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return _error_response(400, "malformed request body", "bad_request")

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return _error_response(400, str(exc), "bad_request")

    @app.post("/api/spectrum")
    async def api_spectrum(payload: dict = Body(...)):
        series = load_series(payload)
        spec = spectral.periodogram(series)
        freqs, power = _downsample(spec, MAX_SPECTRUM_BINS)
        peaks = spectral.top_peaks(series, count=5)
        return JSONResponse(content={
            "freqs_hz": freqs,
            "power": power,
            "nyquist_hz": series.nyquist_hz,
            "peaks": [{
                "freq_hz": p.freq_hz,
                "power": p.power,
                "damping_rate": p.damping_rate,
            } for p in peaks],
        })

    @app.post("/api/filter")
    async def api_filter(payload: dict = Body(...)):
        series = load_series(payload)
        if not isinstance(payload, dict) or "chain" not in payload:
            raise _HttpError(400, "body needs a 'chain' config", "bad_request")
        try:
            chain = chain_from_dict(payload["chain"])
        except (KeyError, TypeError) as exc:
            raise _HttpError(400, f"invalid chain: {exc}", "bad_request")
        out, reports = cascade_report(series, chain)
        return JSONResponse(content={
            "series": _series_to_body(out),
            "stages": [{
                "freq_hz": r.freq_hz,
                "damping_rate": r.damping_rate,
                "sigma_f2": r.sigma_f2,
                "settle_samples": r.settle_samples,
                "gain": list(r.gain),
            } for r in reports],
        })

    @app.get("/api/datasets")
    async def api_datasets():
        if root is None or not root.is_dir():
            return JSONResponse(content={"datasets": []})
        entries = []
        for path in sorted(root.glob("*.csv")):
            entry = {"id": path.stem, "file": path.name,
                     "digest": digest_file(path)}
            try:
                series = read_csv(path)
                entry.update(samples=len(series), dt=series.dt,
                             units=series.units)
            except DeringError:
                entry.update(error="unreadable")
            entries.append(entry)
        return JSONResponse(content={"datasets": entries})

    @app.get("/api/datasets/{dataset_id}")
    async def api_dataset(dataset_id: str):
        path = resolve_dataset(dataset_id)
        series = read_csv(path)
        body = _series_to_body(series)
        body.update(id=path.stem, digest=digest_file(path))
        return JSONResponse(content=body)

    return app
