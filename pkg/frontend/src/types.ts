/** Shapes exchanged with the filtering service. Field names mirror the
 * server's JSON exactly; keep snake_case. */

export interface SeriesBody {
  dt: number;
  t0: number;
  units: string;
  values: number[];
}

export interface DatasetEntry {
  id: string;
  file: string;
  digest: string;
  samples?: number;
  dt?: number;
  units?: string;
  error?: string;
}

export interface Peak {
  freq_hz: number;
  power: number;
  damping_rate: number | null;
}

export interface SpectrumBody {
  freqs_hz: number[];
  power: number[];
  nyquist_hz: number;
  peaks: Peak[];
}

export interface StageConfig {
  freq_hz: number;
  damping_rate: number;
  sigma_x2: number;
  sigma_f2: number;
}

export interface ChainConfig {
  dt: number;
  post_smooth: number;
  stages: StageConfig[];
}

export interface StageReport {
  freq_hz: number;
  damping_rate: number;
  sigma_f2: number;
  settle_samples: number;
  gain: number[];
}

export interface FilterBody {
  series: SeriesBody;
  stages: StageReport[];
}
