/** Canvas line plots. No chart dependency: two fixed layouts (time trace
 * with overlay + settle shading, spectrum with peak markers) cover the
 * whole console. */

export interface Tick {
  value: number;
  label: string;
}

/** Round tick positions at 1/2/5 steps covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, count = 5): Tick[] {
  if (!(hi > lo) || !Number.isFinite(lo) || !Number.isFinite(hi)) return [];
  const rawStep = (hi - lo) / Math.max(1, count);
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const norm = rawStep / mag;
  const step = (norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10) * mag;
  const ticks: Tick[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    const value = Math.abs(v) < step * 1e-9 ? 0 : v;
    ticks.push({ value, label: formatTick(value, step) });
  }
  return ticks;
}

function formatTick(value: number, step: number): string {
  if (value === 0) return "0";
  const digits = Math.max(0, -Math.floor(Math.log10(step)));
  if (Math.abs(value) >= 1e5 || Math.abs(value) < 1e-3) {
    return value.toExponential(1);
  }
  return value.toFixed(Math.min(digits, 6));
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi > lo)) {
    // flat or empty trace still needs a drawable band
    const mid = Number.isFinite(lo) ? lo : 0;
    return [mid - 1, mid + 1];
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

const AXIS = { left: 64, right: 12, top: 10, bottom: 26 };

interface Frame {
  ctx: CanvasRenderingContext2D;
  x: (v: number) => number;
  y: (v: number) => number;
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

function frame(canvas: HTMLCanvasElement, xr: [number, number],
               yr: [number, number]): Frame {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  canvas.width = Math.round(w * dpr);
  canvas.height = Math.round(h * dpr);
  const ctx = canvas.getContext("2d")!;
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  ctx.clearRect(0, 0, w, h);
  const x0 = AXIS.left;
  const x1 = w - AXIS.right;
  const y0 = h - AXIS.bottom;
  const y1 = AXIS.top;
  return {
    ctx,
    x: (v) => x0 + ((v - xr[0]) / (xr[1] - xr[0])) * (x1 - x0),
    y: (v) => y0 - ((v - yr[0]) / (yr[1] - yr[0])) * (y0 - y1),
    x0, x1, y0, y1,
  };
}

function drawAxes(f: Frame, xr: [number, number], yr: [number, number],
                  xlabel: string): void {
  const { ctx } = f;
  ctx.strokeStyle = "#39404d";
  ctx.fillStyle = "#8b94a3";
  ctx.font = "11px system-ui, sans-serif";
  ctx.lineWidth = 1;
  for (const t of niceTicks(yr[0], yr[1], 5)) {
    const y = f.y(t.value);
    ctx.beginPath();
    ctx.moveTo(f.x0, y);
    ctx.lineTo(f.x1, y);
    ctx.stroke();
    ctx.textAlign = "right";
    ctx.fillText(t.label, f.x0 - 6, y + 3);
  }
  for (const t of niceTicks(xr[0], xr[1], 8)) {
    const x = f.x(t.value);
    ctx.beginPath();
    ctx.moveTo(x, f.y0);
    ctx.lineTo(x, f.y0 + 4);
    ctx.stroke();
    ctx.textAlign = "center";
    ctx.fillText(t.label, x, f.y0 + 16);
  }
  ctx.textAlign = "right";
  ctx.fillText(xlabel, f.x1, f.y0 + 16);
}

function polyline(f: Frame, xs: number[], ys: number[], color: string): void {
  const { ctx } = f;
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.2;
  ctx.beginPath();
  const step = Math.max(1, Math.floor(xs.length / (2 * (f.x1 - f.x0))));
  for (let i = 0; i < xs.length; i += step) {
    const px = f.x(xs[i]!);
    const py = f.y(ys[i]!);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  }
  ctx.stroke();
}

export interface TraceView {
  dt: number;
  t0: number;
  values: number[];
}

export function drawTrace(canvas: HTMLCanvasElement, raw: TraceView,
                          filtered: TraceView | null,
                          settleSeconds: number): void {
  const times = raw.values.map((_, i) => raw.t0 + i * raw.dt);
  const xr: [number, number] = [times[0] ?? 0, times[times.length - 1] ?? 1];
  const pool = filtered === null
    ? raw.values : raw.values.concat(filtered.values);
  const yr = extent(pool);
  const f = frame(canvas, xr, yr);
  if (filtered !== null && settleSeconds > 0) {
    f.ctx.fillStyle = "rgba(124, 109, 61, 0.25)";
    const xEnd = Math.min(f.x(filtered.t0 + settleSeconds), f.x1);
    f.ctx.fillRect(f.x0, f.y1, xEnd - f.x0, f.y0 - f.y1);
  }
  drawAxes(f, xr, yr, "t [s]");
  polyline(f, times, raw.values, "#5a6575");
  if (filtered !== null) {
    const ft = filtered.values.map((_, i) => filtered.t0 + i * filtered.dt);
    polyline(f, ft, filtered.values, "#e8b849");
  }
}

export function drawSpectrum(canvas: HTMLCanvasElement, freqs: number[],
                             power: number[],
                             peaks: { freq_hz: number }[]): void {
  const xr: [number, number] = [freqs[0] ?? 0, freqs[freqs.length - 1] ?? 1];
  const yr = extent(power);
  const f = frame(canvas, xr, [0, yr[1]]);
  drawAxes(f, xr, [0, yr[1]], "f [Hz]");
  polyline(f, freqs, power, "#6fa1d9");
  f.ctx.fillStyle = "#d96f6f";
  for (const p of peaks) {
    const x = f.x(p.freq_hz);
    f.ctx.beginPath();
    f.ctx.moveTo(x, f.y1);
    f.ctx.lineTo(x, f.y1 + 8);
    f.ctx.stroke();
    f.ctx.textAlign = "center";
    f.ctx.fillText(p.freq_hz.toFixed(1), x, f.y1 + 18);
  }
}
