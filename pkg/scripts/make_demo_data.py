"""Generate the demo datasets served by `dering serve --data-dir data`.

Two scenes: the pulse-recovery setup (pulse.csv plus its clean truth) and a
two-tone ringdown on a step force (twotone.csv) for playing with cascade
removal in the tuner.

Usage: python scripts/make_demo_data.py [outdir]
"""

import sys
from pathlib import Path

from dering import (ForceProfile, OscillatorParams, SimConfig, Transient,
                    simulate)
from dering.timeseries import write_csv


def main(outdir: str = "data") -> None:
    root = Path(outdir)
    root.mkdir(parents=True, exist_ok=True)

    pulse = SimConfig(
        params=OscillatorParams(a=0.1, b=1000.0, force_scale=1e-3),
        profile=ForceProfile(kind="pulse", t0=1.0, t1=1.1, amplitude=1e4),
        dt=1e-3, duration=3.0, noise_sigma=0.1, seed=42)
    measured, truth = simulate(pulse)
    write_csv(measured, root / "pulse.csv")
    write_csv(truth, root / "pulse_truth.csv")

    twotone = SimConfig(
        params=OscillatorParams(a=20.0, b=1000.0),
        profile=ForceProfile(kind="step", t0=0.5, amplitude=1.0),
        dt=1e-3, duration=5.0, noise_sigma=0.01, seed=3,
        transients=(
            Transient(freq_hz=12.2, amplitude=10.0, damping_rate=2.0, start=0.5),
            Transient(freq_hz=40.0, amplitude=10.0, damping_rate=2.0, start=0.5)))
    measured, _ = simulate(twotone)
    write_csv(measured, root / "twotone.csv")

    for name in ("pulse.csv", "pulse_truth.csv", "twotone.csv"):
        print(f"wrote {root / name}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
