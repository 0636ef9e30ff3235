/**
 * Minimal hand-built SVG line charts — no DOM, just strings.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  dash?: string;
}

export interface Marker {
  x: number;
  y: number;
  color: string;
  label: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  markers?: Marker[];
  width?: number;
  height?: number;
  yDomain?: [number, number];
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                        "#9467bd", "#8c564b", "#17becf", "#7f7f7f"];

const MARGIN = { top: 36, right: 24, bottom: 48, left: 60 };

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    out.push(v);
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

/** Render a multi-series line chart to an SVG document string. */
export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const allX = spec.series.flatMap((s) => s.x);
  const allY = spec.yDomain ?? extent(spec.series.flatMap((s) => s.y));
  const [x0, x1] = extent(allX);
  const [y0, y1] = allY;
  const sx = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
             `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="14">` +
             `${esc(spec.title)}</text>`);

  // gridlines and axes
  for (const t of ticks(x0, x1)) {
    const px = sx(t);
    parts.push(`<line x1="${px}" y1="${MARGIN.top}" x2="${px}" ` +
               `y2="${MARGIN.top + plotH}" stroke="#ddd"/>`);
    parts.push(`<text x="${px}" y="${MARGIN.top + plotH + 16}" ` +
               `text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of ticks(y0, y1)) {
    const py = sy(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${py}" ` +
               `x2="${MARGIN.left + plotW}" y2="${py}" stroke="#ddd"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${py + 4}" ` +
               `text-anchor="end">${fmt(t)}</text>`);
  }
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" ` +
             `height="${plotH}" fill="none" stroke="#333"/>`);
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" ` +
             `text-anchor="middle">${esc(spec.xLabel)}</text>`);
  parts.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
             `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`);

  for (const s of spec.series) {
    const pts = s.x.map((v, i) => `${sx(v).toFixed(2)},${sy(s.y[i]).toFixed(2)}`);
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<polyline fill="none" stroke="${s.color}" stroke-width="1.6"${dash} ` +
               `points="${pts.join(" ")}"/>`);
  }

  for (const m of spec.markers ?? []) {
    const px = sx(m.x);
    parts.push(`<line x1="${px}" y1="${sy(m.y)}" x2="${px}" ` +
               `y2="${MARGIN.top + plotH}" stroke="${m.color}" stroke-dasharray="4 3"/>`);
    parts.push(`<circle cx="${px}" cy="${sy(m.y)}" r="3.5" fill="${m.color}"/>`);
    parts.push(`<text x="${px + 5}" y="${sy(m.y) - 6}" fill="${m.color}">` +
               `${esc(m.label)}</text>`);
  }

  // legend, top-left inside the plot
  spec.series.forEach((s, i) => {
    const ly = MARGIN.top + 16 + 16 * i;
    const lx = MARGIN.left + 12;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" ` +
               `stroke="${s.color}" stroke-width="1.6"${dash}/>`);
    parts.push(`<text x="${lx + 28}" y="${ly}">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
