"""Uniformly sampled scalar series, CSV persistence, and run manifests.

CSV layout is deliberately minimal and self-describing: comment lines start
with ``#`` and may declare ``dt``, ``t0`` and ``units``; data rows are either
a single value column (with ``dt`` declared in a header) or ``time,value``
pairs on a uniform grid. Values are written with shortest round-trip
precision so a write/read cycle is lossless.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .errors import EmptyInput, NonUniformSampling, ParseError

TOOL_VERSION = "dering 0.1.0"

# Relative timestamp jitter tolerated before a two-column file is rejected.
_UNIFORMITY_RTOL = 1e-6


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar signal.

    Attributes:
        dt: sample interval in seconds (> 0).
        values: finite samples; stored as a read-only float array.
        t0: time of the first sample, seconds.
        units: free-form tag for the value column (e.g. "N").
    """

    dt: float
    values: np.ndarray
    t0: float = 0.0
    units: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.size == 0:
            raise EmptyInput("time series must contain at least one sample")
        if not (self.dt > 0.0) or not np.isfinite(self.dt):
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise ValueError(f"non-finite sample at index {bad}")
        if "\n" in self.units or "\r" in self.units:
            raise ValueError("units tag must be a single line")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def nyquist_hz(self) -> float:
        return 0.5 / self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def with_values(self, values: Iterable[float], units: str | None = None) -> "TimeSeries":
        """Same grid, new samples (and optionally a new units tag)."""
        return TimeSeries(self.dt, np.asarray(values, dtype=float), self.t0,
                          self.units if units is None else units)


def _open_for_read(source) -> tuple[IO[str], bool]:
    if hasattr(source, "read"):
        return source, False
    return open(os.fspath(source), "r", encoding="utf-8"), True


def read_csv(source) -> TimeSeries:
    """Parse a time series from a path or text file object.

    Accepts either ``time,value`` rows on a uniform grid or bare value rows
    with ``# dt=<seconds>`` declared in a header comment.
    """
    fh, should_close = _open_for_read(source)
    try:
        meta: dict[str, str] = {}
        times: list[float] = []
        values: list[float] = []
        two_column: bool | None = None
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    meta[key.strip()] = val.strip()
                continue
            parts = [p.strip() for p in line.split(",")]
            if parts and parts[0].lower() in ("time", "t") :
                continue  # column header row
            try:
                numbers = [float(p) for p in parts if p != ""]
            except ValueError:
                raise ParseError(f"cannot parse row {line!r}", line=lineno)
            if len(numbers) == 1:
                row_two = False
            elif len(numbers) == 2:
                row_two = True
            else:
                raise ParseError(f"expected 1 or 2 columns, got {len(numbers)}", line=lineno)
            if two_column is None:
                two_column = row_two
            elif two_column != row_two:
                raise ParseError("mixed one- and two-column rows", line=lineno)
            if row_two:
                times.append(numbers[0])
                values.append(numbers[1])
            else:
                values.append(numbers[0])
    finally:
        if should_close:
            fh.close()

    if not values:
        raise EmptyInput("no data rows found")

    units = meta.get("units", "")
    if two_column and len(values) >= 2:
        diffs = np.diff(np.asarray(times))
        dt = float(np.median(diffs))
        if dt <= 0:
            raise ParseError("timestamps are not increasing")
        dev = np.abs(diffs - dt)
        worst = int(np.argmax(dev))
        if dev[worst] > _UNIFORMITY_RTOL * dt:
            raise NonUniformSampling(
                f"timestamp spacing deviates by {dev[worst]:.3e}s from dt={dt!r}",
                worst_index=worst + 1,
            )
        return TimeSeries(dt=dt, values=np.asarray(values), t0=float(times[0]), units=units)

    if "dt" not in meta:
        if two_column:  # single time,value row: spacing unknowable
            raise ParseError("a single two-column row needs a '# dt=' header")
        raise ParseError("one-column data needs a '# dt=<seconds>' header")
    try:
        dt = float(meta["dt"])
    except ValueError:
        raise ParseError(f"bad dt header value {meta['dt']!r}")
    t0 = float(meta.get("t0", times[0] if times else 0.0))
    return TimeSeries(dt=dt, values=np.asarray(values), t0=t0, units=units)


def write_csv(series: TimeSeries, sink) -> None:
    """Write a series in the canonical one-column-with-header layout."""
    if len(series.values) == 0:
        raise EmptyInput("refusing to write an empty series")
    lines = [f"# dt={series.dt!r}", f"# t0={series.t0!r}"]
    if series.units:
        lines.append(f"# units={series.units}")
    lines.extend(repr(float(v)) for v in series.values)
    text = "\n".join(lines) + "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(os.fspath(sink), "w", encoding="utf-8") as fh:
            fh.write(text)


def series_to_dict(series: TimeSeries) -> dict:
    return {
        "dt": series.dt,
        "t0": series.t0,
        "units": series.units,
        "values": [float(v) for v in series.values],
    }


def series_from_dict(obj: dict) -> TimeSeries:
    return TimeSeries(
        dt=float(obj["dt"]),
        values=np.asarray(obj["values"], dtype=float),
        t0=float(obj.get("t0", 0.0)),
        units=str(obj.get("units", "")),
    )


def canonical_json(obj) -> str:
    """Key-sorted, separator-stable JSON used wherever byte parity matters."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def digest_file(path) -> str:
    with open(os.fspath(path), "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def digest_series(series: TimeSeries) -> str:
    buf = io.StringIO()
    write_csv(series, buf)
    return sha256_hex(buf.getvalue())


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every produced dataset."""

    input_digest: str
    config: dict
    settle: dict = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    def to_json(self) -> str:
        return canonical_json({
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "config": self.config,
            "settle": self.settle,
        })

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        obj = json.loads(text)
        return cls(
            input_digest=obj["input_digest"],
            config=obj["config"],
            settle=obj.get("settle", {}),
            tool_version=obj.get("tool_version", TOOL_VERSION),
        )
