import type { ChainConfig, StageConfig } from "./types.js";

/** One removal stage as the operator sees it. Order in the list is the
 * order stages are applied. */
export interface Stage {
  freq_hz: number;
  damping_rate: number;
  sigma_f2: number;
  enabled: boolean;
}

export const SIGMA_F2_MIN = 1e0;
export const SIGMA_F2_MAX = 1e8;

/** Slider position in [0, 1] <-> sigma_f2 on a log scale over eight decades. */
export function sliderToSigma(pos: number): number {
  const clamped = Math.min(1, Math.max(0, pos));
  return 10 ** (Math.log10(SIGMA_F2_MIN)
    + clamped * Math.log10(SIGMA_F2_MAX / SIGMA_F2_MIN));
}

export function sigmaToSlider(sigma: number): number {
  const clamped = Math.min(SIGMA_F2_MAX, Math.max(SIGMA_F2_MIN, sigma));
  return Math.log10(clamped / SIGMA_F2_MIN) / Math.log10(SIGMA_F2_MAX / SIGMA_F2_MIN);
}

/** Client-side tuning state: which dataset, which stages, one sigma_x2.
 * Pure data + derivations; no network here. */
export class TuningSession {
  datasetId: string | null = null;
  dt = 0;
  sigmaX2 = 1e-4;
  stages: Stage[] = [];

  loadDataset(id: string, dt: number): void {
    this.datasetId = id;
    this.dt = dt;
    this.stages = [];
  }

  addStage(freq_hz: number, damping_rate: number | null, sigma_f2 = 1e4): Stage {
    const stage: Stage = {
      freq_hz,
      damping_rate: damping_rate ?? 0,
      sigma_f2,
      enabled: true,
    };
    this.stages.push(stage);
    return stage;
  }

  removeStage(index: number): void {
    this.stages.splice(index, 1);
  }

  setSigmaF2(index: number, sigma_f2: number): void {
    const stage = this.stages[index];
    if (stage) stage.sigma_f2 = sigma_f2;
  }

  setEnabled(index: number, enabled: boolean): void {
    const stage = this.stages[index];
    if (stage) stage.enabled = enabled;
  }

  enabledStages(): Stage[] {
    return this.stages.filter((s) => s.enabled);
  }

  /** Chain for /api/filter and for export; null when nothing is enabled
   * (the overlay then just shows the raw trace). */
  chainConfig(): ChainConfig | null {
    const enabled = this.enabledStages();
    if (this.datasetId === null || enabled.length === 0) return null;
    const stages: StageConfig[] = enabled.map((s) => ({
      freq_hz: s.freq_hz,
      damping_rate: s.damping_rate,
      sigma_x2: this.sigmaX2,
      sigma_f2: s.sigma_f2,
    }));
    return { dt: this.dt, post_smooth: 0, stages };
  }

  /** Pretty JSON directly usable as a `dering filter --config` file. */
  exportJson(): string | null {
    const chain = this.chainConfig();
    return chain === null ? null : JSON.stringify(chain, null, 2) + "\n";
  }
}
