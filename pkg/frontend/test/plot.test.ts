import { describe, expect, it } from "vitest";

import { extent, niceTicks } from "../src/plot.js";

describe("niceTicks", () => {
  it("uses 1/2/5 steps inside the range", () => {
    const ticks = niceTicks(0, 10, 5);
    expect(ticks.map((t) => t.value)).toEqual([0, 2, 4, 6, 8, 10]);
  });

  it("handles negative spans and zero crossing", () => {
    const values = niceTicks(-1.2, 1.2, 5).map((t) => t.value);
    expect(values).toContain(0);
    expect(Math.min(...values)).toBeGreaterThanOrEqual(-1.2);
    expect(Math.max(...values)).toBeLessThanOrEqual(1.2 + 1e-9);
  });

  it("labels tiny and huge magnitudes in exponent form", () => {
    expect(niceTicks(0, 4e-4, 4).some((t) => t.label.includes("e"))).toBe(true);
    expect(niceTicks(0, 4e6, 4).some((t) => t.label.includes("e"))).toBe(true);
  });

  it("returns nothing for a degenerate range", () => {
    expect(niceTicks(5, 5)).toEqual([]);
    expect(niceTicks(0, Number.NaN)).toEqual([]);
  });
});

describe("extent", () => {
  it("pads the observed range", () => {
    const [lo, hi] = extent([0, 10]);
    expect(lo).toBeCloseTo(-0.5, 12);
    expect(hi).toBeCloseTo(10.5, 12);
  });

  it("opens a band around flat data", () => {
    expect(extent([3, 3, 3])).toEqual([2, 4]);
    expect(extent([])).toEqual([-1, 1]);
  });
});
