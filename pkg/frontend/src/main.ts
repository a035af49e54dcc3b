import { ApiError, Client } from "./api.js";
import { debounce, LatestWins } from "./schedule.js";
import {
  sigmaToSlider, sliderToSigma, TuningSession,
} from "./session.js";
import { drawSpectrum, drawTrace } from "./plot.js";
import { traceStats } from "./stats.js";
import type { Peak, SeriesBody, SpectrumBody } from "./types.js";

const params = new URLSearchParams(window.location.search);
const client = new Client(params.get("api") ?? "http://127.0.0.1:8550");
const session = new TuningSession();
const gate = new LatestWins();

const el = {
  banner: byId("banner"),
  datasets: byId("datasets"),
  empty: byId("empty-state"),
  workspace: byId("workspace"),
  trace: byId("trace") as HTMLCanvasElement,
  spectrum: byId("spectrum") as HTMLCanvasElement,
  spectrumTitle: byId("spectrum-title"),
  peaks: byId("peaks"),
  stages: byId("stages"),
  stats: byId("stats"),
  sigmaX2: byId("sigma-x2") as HTMLInputElement,
  exportBtn: byId("export") as HTMLButtonElement,
  exportOut: byId("export-out") as HTMLTextAreaElement,
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

let raw: SeriesBody | null = null;
let filtered: SeriesBody | null = null;
let settleSeconds = 0;

function banner(message: string | null): void {
  el.banner.textContent = message ?? "";
  el.banner.style.display = message === null ? "none" : "block";
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.message} [${err.code}]`;
  return "server unreachable; is `dering serve` running? retrying on next action";
}

async function loadDatasetList(): Promise<void> {
  try {
    const entries = await client.datasets();
    banner(null);
    el.datasets.replaceChildren();
    for (const entry of entries) {
      const button = document.createElement("button");
      button.textContent = entry.error
        ? `${entry.id} (unreadable)`
        : `${entry.id} (${entry.samples} @ ${entry.dt}s)`;
      button.disabled = Boolean(entry.error);
      button.addEventListener("click", () => void loadDataset(entry.id));
      el.datasets.append(button);
    }
    el.empty.style.display = entries.length === 0 ? "block" : "none";
  } catch (err) {
    banner(describeError(err));
  }
}

async function loadDataset(id: string): Promise<void> {
  try {
    const body = await client.dataset(id);
    raw = body;
    filtered = null;
    settleSeconds = 0;
    session.loadDataset(id, body.dt);
    el.workspace.style.display = "block";
    banner(null);
    renderStages();
    render();
    const spec = await client.spectrum({ dataset: id });
    renderPeaks(spec.peaks);
    renderSpectrum(spec, "spectrum of raw trace");
  } catch (err) {
    banner(describeError(err));
  }
}

function renderPeaks(peaks: Peak[]): void {
  el.peaks.replaceChildren();
  for (const peak of peaks) {
    const button = document.createElement("button");
    const damping = peak.damping_rate === null
      ? "" : `, λ≈${peak.damping_rate.toFixed(2)}`;
    button.textContent = `add stage @ ${peak.freq_hz.toFixed(2)} Hz${damping}`;
    button.addEventListener("click", () => {
      session.addStage(peak.freq_hz, peak.damping_rate);
      renderStages();
      scheduleRefilter();
    });
    el.peaks.append(button);
  }
}

function renderSpectrum(spec: SpectrumBody, title: string): void {
  el.spectrumTitle.textContent = title;
  drawSpectrum(el.spectrum, spec.freqs_hz, spec.power, spec.peaks);
}

function renderStages(): void {
  el.stages.replaceChildren();
  session.stages.forEach((stage, index) => {
    const row = document.createElement("div");
    row.className = "stage";

    const enable = document.createElement("input");
    enable.type = "checkbox";
    enable.checked = stage.enabled;
    enable.addEventListener("change", () => {
      session.setEnabled(index, enable.checked);
      scheduleRefilter();
    });

    const label = document.createElement("span");
    label.textContent =
      `${stage.freq_hz.toFixed(2)} Hz, λ=${stage.damping_rate.toFixed(2)}`;

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1000";
    slider.value = String(Math.round(sigmaToSlider(stage.sigma_f2) * 1000));
    const readout = document.createElement("code");
    readout.textContent = formatSigma(stage.sigma_f2);
    slider.addEventListener("input", () => {
      const sigma = sliderToSigma(Number(slider.value) / 1000);
      session.setSigmaF2(index, sigma);
      readout.textContent = formatSigma(sigma);
      scheduleRefilter();
    });

    const remove = document.createElement("button");
    remove.textContent = "×";
    remove.addEventListener("click", () => {
      session.removeStage(index);
      renderStages();
      scheduleRefilter();
    });

    row.append(enable, label, slider, readout, remove);
    el.stages.append(row);
  });
  el.exportBtn.disabled = session.chainConfig() === null;
}

function formatSigma(sigma: number): string {
  return `σ_f²=${sigma.toExponential(2)}`;
}

const scheduleRefilter = debounce(150, () => void refilter());

async function refilter(): Promise<void> {
  if (raw === null || session.datasetId === null) return;
  const chain = session.chainConfig();
  el.exportBtn.disabled = chain === null;
  if (chain === null) {
    // nothing enabled: overlay is just the raw trace again
    filtered = null;
    settleSeconds = 0;
    render();
    const spec = await gate.run(() => client.spectrum({ dataset: session.datasetId! }));
    if (spec !== undefined) renderSpectrum(spec, "spectrum of raw trace");
    return;
  }
  try {
    const result = await gate.run(async () => {
      const body = await client.filter({ dataset: session.datasetId! }, chain);
      const spec = await client.spectrum({ series: body.series });
      return { body, spec };
    });
    if (result === undefined) return; // superseded by a newer slider value
    filtered = result.body.series;
    settleSeconds = Math.max(
      0, ...result.body.stages.map((s) => s.settle_samples)) * chain.dt;
    banner(null);
    render();
    renderSpectrum(result.spec, "spectrum of filtered output");
  } catch (err) {
    banner(describeError(err));
  }
}

function render(): void {
  if (raw === null) return;
  drawTrace(el.trace, raw, filtered, settleSeconds);
  const source = filtered ?? raw;
  const settle = filtered === null
    ? 0 : Math.round(settleSeconds / source.dt);
  const stats = traceStats(source.values, settle);
  const overshoot = stats.overshoot === null
    ? "n/a" : `${(100 * stats.overshoot).toFixed(1)}%`;
  el.stats.textContent =
    `${filtered === null ? "raw" : "filtered"}: `
    + `min ${stats.min.toPrecision(4)}, max ${stats.max.toPrecision(4)}, `
    + `mean ${stats.mean.toPrecision(4)}, overshoot ${overshoot}`
    + (settle > 0 ? ` (first ${settle} samples settling, shaded)` : "");
}

el.sigmaX2.addEventListener("change", () => {
  const value = Number(el.sigmaX2.value);
  if (Number.isFinite(value) && value > 0) {
    session.sigmaX2 = value;
    scheduleRefilter();
  }
});

el.exportBtn.addEventListener("click", () => {
  const json = session.exportJson();
  if (json === null) return;
  el.exportOut.value = json;
  el.exportOut.style.display = "block";
  const blob = new Blob([json], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `${session.datasetId ?? "chain"}-chain.json`;
  link.click();
  URL.revokeObjectURL(link.href);
});

window.addEventListener("resize", render);
void loadDatasetList();
