import { describe, expect, it } from "vitest";

import {
  SIGMA_F2_MAX, SIGMA_F2_MIN, sigmaToSlider, sliderToSigma, TuningSession,
} from "../src/session.js";

function loaded(): TuningSession {
  const s = new TuningSession();
  s.loadDataset("pulse", 1e-3);
  return s;
}

describe("slider mapping", () => {
  it("covers eight decades on a log scale", () => {
    expect(sliderToSigma(0)).toBe(SIGMA_F2_MIN);
    expect(sliderToSigma(1)).toBe(SIGMA_F2_MAX);
    expect(sliderToSigma(0.5)).toBeCloseTo(1e4, 6);
    expect(sliderToSigma(0.25)).toBeCloseTo(1e2, 6);
  });

  it("round-trips", () => {
    for (const pos of [0, 0.125, 0.5, 0.875, 1]) {
      expect(sigmaToSlider(sliderToSigma(pos))).toBeCloseTo(pos, 12);
    }
  });

  it("clamps out-of-range input", () => {
    expect(sliderToSigma(-0.3)).toBe(SIGMA_F2_MIN);
    expect(sliderToSigma(1.7)).toBe(SIGMA_F2_MAX);
    expect(sigmaToSlider(1e-5)).toBe(0);
    expect(sigmaToSlider(1e12)).toBe(1);
  });
});

describe("TuningSession", () => {
  it("builds the chain in stage order with the shared sigma_x2", () => {
    const s = loaded();
    s.sigmaX2 = 1e-3;
    s.addStage(12.2, 2.0, 1e-2);
    s.addStage(40.0, 2.0, 1e-2);
    s.addStage(85.7, 1.5, 1e3);
    const chain = s.chainConfig()!;
    expect(chain.dt).toBe(1e-3);
    expect(chain.post_smooth).toBe(0);
    expect(chain.stages.map((st) => st.freq_hz)).toEqual([12.2, 40.0, 85.7]);
    expect(chain.stages.every((st) => st.sigma_x2 === 1e-3)).toBe(true);
  });

  it("null damping from an undamped peak becomes zero", () => {
    const s = loaded();
    s.addStage(40.0, null);
    expect(s.stages[0]!.damping_rate).toBe(0);
  });

  it("skips disabled stages but keeps order of the rest", () => {
    const s = loaded();
    s.addStage(12.2, 2.0);
    s.addStage(40.0, 2.0);
    s.addStage(85.7, 1.5);
    s.setEnabled(1, false);
    const chain = s.chainConfig()!;
    expect(chain.stages.map((st) => st.freq_hz)).toEqual([12.2, 85.7]);
  });

  it("yields no chain when nothing is enabled or loaded", () => {
    const s = new TuningSession();
    expect(s.chainConfig()).toBeNull();
    const t = loaded();
    expect(t.chainConfig()).toBeNull(); // no stages yet
    t.addStage(40.0, 2.0);
    t.setEnabled(0, false);
    expect(t.chainConfig()).toBeNull();
    expect(t.exportJson()).toBeNull();
  });

  it("exports JSON a filter config reader accepts", () => {
    const s = loaded();
    s.addStage(40.0, 2.0, 1e4);
    const parsed = JSON.parse(s.exportJson()!);
    expect(parsed).toEqual({
      dt: 1e-3,
      post_smooth: 0,
      stages: [{ freq_hz: 40.0, damping_rate: 2.0,
        sigma_x2: 1e-4, sigma_f2: 1e4 }],
    });
    expect(s.exportJson()!.endsWith("}\n")).toBe(true);
  });

  it("export matches the exact chain sent to the filter", () => {
    // the overlay and the exported file must come from the same config
    const s = loaded();
    s.addStage(12.2, 2.31, 1e-2);
    s.setSigmaF2(0, sliderToSigma(0.41));
    const sent = s.chainConfig();
    expect(JSON.parse(s.exportJson()!)).toEqual(sent);
  });

  it("loading a dataset resets the stage list", () => {
    const s = loaded();
    s.addStage(40.0, 2.0);
    s.loadDataset("twotone", 2e-3);
    expect(s.stages).toEqual([]);
    expect(s.dt).toBe(2e-3);
  });

  it("removeStage drops exactly the indexed stage", () => {
    const s = loaded();
    s.addStage(12.2, 2.0);
    s.addStage(40.0, 2.0);
    s.removeStage(0);
    expect(s.stages.map((st) => st.freq_hz)).toEqual([40.0]);
  });
});
