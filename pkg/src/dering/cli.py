"""Command-line workflow: synthesize, analyze, filter, response, serve.

stdout carries data only (analyze prints JSON); everything diagnostic goes
to stderr. Exit codes: 0 ok, 2 usage or config problems, 3 analyses that
come back empty.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from . import deconvolve, response, spectral, synth
from .errors import DeringError
from .statespace import ComplexFrequency, from_complex_root, kalman_model
from .timeseries import (RunManifest, canonical_json, digest_file, read_csv,
                         sha256_hex, write_csv)


def _fail(message: str, code: int = 2) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        _fail(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail(f"invalid JSON in {path}: {exc}")
    raise AssertionError("unreachable")


@click.group()
def main():
    """Deconvolve oscillatory transients from force measurements."""


@main.command("synth")
@click.option("--config", "config_path", required=True,
              help="Simulation config JSON.")
@click.option("--output", "output_dir", required=True,
              help="Directory for measured.csv, truth.csv, manifest.json.")
@click.option("--seed", type=int, default=None,
              help="Override the config's RNG seed.")
def cmd_synth(config_path: str, output_dir: str, seed: int | None):
    """Simulate the oscillator under a force profile and write the dataset."""
    obj = _load_json(config_path)
    try:
        cfg = synth.sim_config_from_dict(obj)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        measured, truth = synth.simulate(cfg)
    except (DeringError, KeyError, TypeError, ValueError) as exc:
        _fail(str(exc))
        return
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(measured, outdir / "measured.csv")
    write_csv(truth, outdir / "truth.csv")
    echo = synth.sim_config_to_dict(cfg)
    manifest = RunManifest(input_digest=sha256_hex(canonical_json(echo)), config=echo)
    (outdir / "manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")


@main.command("analyze")
@click.option("--input", "input_path", required=True, help="Dataset CSV.")
def cmd_analyze(input_path: str):
    """Print the dominant spectral peaks of a dataset as JSON."""
    try:
        series = read_csv(input_path)
        peaks = spectral.top_peaks(series, count=5)
    except FileNotFoundError:
        _fail(f"input file not found: {input_path}")
        return
    except (DeringError, ValueError) as exc:
        _fail(str(exc))
        return
    if not peaks:
        click.echo("no dominant peak: the spectrum is flat", err=True)
        sys.exit(3)
    click.echo(json.dumps({
        "nyquist_hz": series.nyquist_hz,
        "peaks": [{"freq_hz": p.freq_hz, "power": p.power,
                   "damping_rate": p.damping_rate} for p in peaks],
    }, indent=2))


@main.command("filter")
@click.option("--input", "input_path", required=True, help="Dataset CSV.")
@click.option("--config", "config_path", required=True, help="Filter chain JSON.")
@click.option("--output", "output_dir", required=True,
              help="Directory for force.csv and manifest.json.")
def cmd_filter(input_path: str, config_path: str, output_dir: str):
    """Apply a filter chain and write the deconvolved force."""
    obj = _load_json(config_path)
    try:
        chain = deconvolve.chain_from_dict(obj)
        series = read_csv(input_path)
        out, reports = deconvolve.cascade_report(series, chain)
    except FileNotFoundError:
        _fail(f"input file not found: {input_path}")
        return
    except (DeringError, KeyError, TypeError, ValueError) as exc:
        _fail(str(exc))
        return
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(out, outdir / "force.csv")
    manifest = RunManifest(
        input_digest=digest_file(input_path),
        config=deconvolve.chain_to_dict(chain),
        settle={"stages": [{
            "freq_hz": r.freq_hz,
            "damping_rate": r.damping_rate,
            "sigma_f2": r.sigma_f2,
            "settle_samples": r.settle_samples,
            "gain": list(r.gain),
        } for r in reports]})
    (outdir / "manifest.json").write_text(manifest.to_json() + "\n", encoding="utf-8")


def _grid_from(obj, dt: float) -> np.ndarray:
    if obj is None:
        return response.default_grid(dt)
    if isinstance(obj, list):
        return np.asarray([float(f) for f in obj])
    start = float(obj.get("start", 0.1))
    stop = float(obj.get("stop", 0.9 * 0.5 / dt))
    count = int(obj.get("count", 200))
    if obj.get("spacing", "log") == "linear":
        return np.linspace(start, stop, count)
    return np.geomspace(start, stop, count)


@main.command("response")
@click.option("--config", "config_path", required=True,
              help="Stage or chain config with a sigma_f2_list sweep.")
@click.option("--output", "output_path", required=True, help="Response table CSV.")
def cmd_response(config_path: str, output_path: str):
    """Probe the filter frequency response across a sigma_f2 sweep."""
    obj = _load_json(config_path)
    try:
        dt = float(obj["dt"])
        sweep = [float(v) for v in obj.get("sigma_f2_list", [])]
        if not sweep:
            raise ValueError("sigma_f2_list must contain at least one value")
        stages = obj.get("stages")
        if stages is None:
            if "stage" not in obj:
                raise ValueError("config needs a 'stage' or 'stages' entry")
            stages = [obj["stage"]]
        cycles = int(obj.get("cycles", 20))
        grid = _grid_from(obj.get("grid"), dt)
        columns = []
        for sf2 in sweep:
            models = [
                kalman_model(
                    from_complex_root(ComplexFrequency(
                        freq_hz=float(s["freq_hz"]),
                        damping_rate=float(s.get("damping_rate", 0.0)))),
                    dt, float(s["sigma_x2"]), sf2)
                for s in stages]
            points = response.cascade_response(models, grid, cycles)
            columns.append([p.gain for p in points])
        freqs = [p.freq_hz for p in points]
    except (DeringError, KeyError, TypeError, ValueError) as exc:
        _fail(str(exc))
        return
    lines = [f"# dt={dt!r}",
             "freq_hz," + ",".join(f"sigma_f2={v!r}" for v in sweep)]
    for i, f in enumerate(freqs):
        lines.append(",".join([repr(f)] + [repr(col[i]) for col in columns]))
    Path(output_path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@main.command("serve")
@click.option("--address", default="127.0.0.1:8550", show_default=True,
              help="host:port to bind.")
@click.option("--data-dir", "data_dir", default=None,
              help="Directory of CSV datasets to expose.")
def cmd_serve(address: str, data_dir: str | None):
    """Serve the HTTP API until terminated."""
    import uvicorn

    from .service import create_app

    host, sep, port_text = address.rpartition(":")
    if not sep or not host:
        _fail(f"address must be host:port, got {address!r}")
    try:
        port = int(port_text)
    except ValueError:
        _fail(f"bad port in address {address!r}")
        return
    app = create_app(data_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except SystemExit as exc:
        if exc.code not in (0, None):
            _fail(f"server failed to start on {address}")
        raise
    except OSError as exc:
        _fail(f"cannot bind {address}: {exc}")


if __name__ == "__main__":
    main()
