"""Frequency-response sweep for a single deconvolution stage.

Probes a 50 Hz / lambda=2 stage over a log grid for several force-variance
settings and writes the gain table as CSV (same layout as `dering response`).
The notch at the stage frequency stays put; everything above it opens up as
sigma_f2 grows.

Usage: python scripts/response_curves.py [out.csv]
"""

import sys

import numpy as np

from dering import (ComplexFrequency, frequency_response, from_complex_root,
                    kalman_model)

DT = 1e-3
SWEEP = (1e2, 1e4, 1e6, 1e8)


def main(out_path: str = "response_curves.csv") -> None:
    params = from_complex_root(ComplexFrequency(freq_hz=50.0, damping_rate=2.0))
    grid = np.unique(np.concatenate([
        np.geomspace(0.1, 0.9 * 0.5 / DT, 120),
        np.linspace(45.0, 55.0, 81),
    ]))
    columns = []
    for sf2 in SWEEP:
        pts = frequency_response(kalman_model(params, DT, 1.0, sf2), grid)
        columns.append([p.gain for p in pts])
        gains = np.asarray(columns[-1])
        freqs = np.asarray([p.freq_hz for p in pts])
        notch = freqs[np.argmin(gains)]
        hi = gains[np.argmin(np.abs(freqs - 100.0))]
        print(f"sigma_f2={sf2:8.0e}  notch at {notch:6.2f} Hz  "
              f"gain(100 Hz)={hi:.3f}")

    lines = [f"# dt={DT!r}",
             "freq_hz," + ",".join(f"sigma_f2={v!r}" for v in SWEEP)]
    for i, f in enumerate(grid):
        lines.append(",".join([repr(float(f))]
                              + [repr(col[i]) for col in columns]))
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(grid)} rows to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "response_curves.csv")
