/** Summary numbers for the filtered trace; the plausibility call itself
 * stays with the operator. */
export interface TraceStats {
  min: number;
  max: number;
  mean: number;
  /** (max - plateau) / |plateau| where plateau is the mean of the last
   * quarter of the usable window; null when the plateau is ~zero. */
  overshoot: number | null;
  settleSamples: number;
}

export function traceStats(values: number[], settleSamples = 0): TraceStats {
  const n = values.length;
  const from = Math.min(Math.max(0, settleSamples), n);
  const usable = values.slice(from);
  if (usable.length === 0) {
    return { min: NaN, max: NaN, mean: NaN, overshoot: null,
      settleSamples: from };
  }
  let min = Infinity;
  let max = -Infinity;
  let sum = 0;
  for (const v of usable) {
    if (v < min) min = v;
    if (v > max) max = v;
    sum += v;
  }
  const tail = usable.slice(Math.floor((3 * usable.length) / 4));
  const plateau = tail.reduce((acc, v) => acc + v, 0) / tail.length;
  const overshoot = Math.abs(plateau) > 1e-12
    ? (max - plateau) / Math.abs(plateau)
    : null;
  return { min, max, mean: sum / usable.length, overshoot,
    settleSamples: from };
}
