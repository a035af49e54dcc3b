import { describe, expect, it } from "vitest";

import { traceStats } from "../src/stats.js";

describe("traceStats", () => {
  it("reports min/max/mean over the full window without settle", () => {
    const s = traceStats([1, -2, 3, 0]);
    expect(s.min).toBe(-2);
    expect(s.max).toBe(3);
    expect(s.mean).toBeCloseTo(0.5, 12);
    expect(s.settleSamples).toBe(0);
  });

  it("excludes the settle prefix", () => {
    const values = [100, 100, 1, 2, 3, 4];
    const s = traceStats(values, 2);
    expect(s.max).toBe(4);
    expect(s.min).toBe(1);
    expect(s.mean).toBeCloseTo(2.5, 12);
    expect(s.settleSamples).toBe(2);
  });

  it("overshoot is peak over the late plateau", () => {
    // ramps to 1.5 then settles at 1.0 for the last quarter
    const values = [0.2, 1.5, 1.1, 1.0, 1.0, 1.0, 1.0, 1.0];
    const s = traceStats(values, 0);
    expect(s.overshoot).toBeCloseTo(0.5, 12);
  });

  it("overshoot is null on a ~zero plateau", () => {
    const s = traceStats([1, -1, 0, 0, 0, 0, 0, 0]);
    expect(s.overshoot).toBeNull();
  });

  it("settle past the end leaves NaN stats, not a crash", () => {
    const s = traceStats([1, 2], 10);
    expect(Number.isNaN(s.min)).toBe(true);
    expect(s.overshoot).toBeNull();
    expect(s.settleSamples).toBe(2);
  });
});
