/**
 * The three figure kinds rendered from simulator sample files.
 *
 * Statistics are always recomputed from the raw samples.csv rather
 * than trusted from summary.txt, so a figure doubles as a cross-check
 * of the run's own summary.
 */

import { writeFileSync } from "fs";
import { dirname, join } from "path";

import { poolByScheme, readManifest, readSamples } from "./csv.js";
import { ecdf, percentile } from "./stats.js";
import { Marker, PALETTE, renderChart, Series } from "./svg.js";

export type PlotKind = "cdf" | "percentile_vs_k" | "sweep_cdf";

export interface PlotSpec {
  kind: PlotKind;
  inputs: string[];          // samples.csv paths
  output: string;            // .svg target
  schemes?: string[];        // optional scheme filter
  xLabel?: string;
  yLabel?: string;
  title?: string;
}

export interface SchemeAnnotation {
  scheme: string;
  p05: number;
}

function manifestFor(samplesPath: string): Record<string, unknown> {
  return readManifest(join(dirname(samplesPath), "manifest.json")).config;
}

/** Thin the sorted CDF support so huge files stay plottable. */
function thin(values: number[], cap = 2000): number[] {
  if (values.length <= cap) return values;
  const out: number[] = [];
  for (let i = 0; i < cap; i++) {
    out.push(values[Math.round((i / (cap - 1)) * (values.length - 1))]);
  }
  return out;
}

function plotCdf(spec: PlotSpec): SchemeAnnotation[] {
  if (spec.inputs.length !== 1) {
    throw new Error("cdf plots take exactly one samples.csv input");
  }
  const pools = poolByScheme(readSamples(spec.inputs[0]), spec.schemes);
  const series: Series[] = [];
  const markers: Marker[] = [];
  const annotations: SchemeAnnotation[] = [];
  let i = 0;
  for (const [scheme, rates] of pools) {
    const color = PALETTE[i++ % PALETTE.length];
    const { x, y } = ecdf(rates);
    series.push({ x: thin(x), y: thin(y), label: scheme, color });
    const p05 = percentile(rates, 0.05);
    markers.push({ x: p05, y: 0.05, color, label: `p05 ${p05.toPrecision(4)}` });
    annotations.push({ scheme, p05 });
  }
  const svg = renderChart({
    title: spec.title ?? "Per-user spectral efficiency CDF",
    xLabel: spec.xLabel ?? "spectral efficiency [bit/s/Hz]",
    yLabel: spec.yLabel ?? "CDF",
    series,
    markers,
    yDomain: [0, 1],
  });
  writeFileSync(spec.output, svg);
  return annotations;
}

function plotPercentileVsK(spec: PlotSpec): SchemeAnnotation[] {
  const byScheme = new Map<string, { k: number; p05: number }[]>();
  for (const input of spec.inputs) {
    const k = Number(manifestFor(input).k);
    for (const [scheme, rates] of poolByScheme(readSamples(input), spec.schemes)) {
      let pts = byScheme.get(scheme);
      if (!pts) {
        pts = [];
        byScheme.set(scheme, pts);
      }
      pts.push({ k, p05: percentile(rates, 0.05) });
    }
  }
  const series: Series[] = [];
  const annotations: SchemeAnnotation[] = [];
  let i = 0;
  for (const [scheme, pts] of byScheme) {
    pts.sort((a, b) => a.k - b.k);
    series.push({
      x: pts.map((p) => p.k),
      y: pts.map((p) => p.p05),
      label: scheme,
      color: PALETTE[i++ % PALETTE.length],
    });
    annotations.push({ scheme, p05: pts[pts.length - 1].p05 });
  }
  const svg = renderChart({
    title: spec.title ?? "5th-percentile spectral efficiency vs. user count",
    xLabel: spec.xLabel ?? "number of users K",
    yLabel: spec.yLabel ?? "5th-percentile SE [bit/s/Hz]",
    series,
  });
  writeFileSync(spec.output, svg);
  return annotations;
}

function sweepLabel(config: Record<string, unknown>): string {
  const s = Number(config.s);
  if (s > 0) return `S=${s}, N_s=${config.n_per_surface}`;
  return `M=${config.m}`;
}

function plotSweepCdf(spec: PlotSpec): SchemeAnnotation[] {
  const series: Series[] = [];
  const markers: Marker[] = [];
  const annotations: SchemeAnnotation[] = [];
  let i = 0;
  for (const input of spec.inputs) {
    const label = sweepLabel(manifestFor(input));
    for (const [scheme, rates] of poolByScheme(readSamples(input), spec.schemes)) {
      const color = PALETTE[i % PALETTE.length];
      const dash = i >= PALETTE.length ? "5 3" : undefined;
      i++;
      const { x, y } = ecdf(rates);
      const name = `${scheme} (${label})`;
      series.push({ x: thin(x), y: thin(y), label: name, color, dash });
      const p05 = percentile(rates, 0.05);
      markers.push({ x: p05, y: 0.05, color, label: `p05 ${p05.toPrecision(4)}` });
      annotations.push({ scheme: name, p05 });
    }
  }
  const svg = renderChart({
    title: spec.title ?? "Per-user spectral efficiency CDF across sweep points",
    xLabel: spec.xLabel ?? "spectral efficiency [bit/s/Hz]",
    yLabel: spec.yLabel ?? "CDF",
    series,
    markers,
    yDomain: [0, 1],
  });
  writeFileSync(spec.output, svg);
  return annotations;
}

/** Render one figure; returns the annotated per-scheme 5th percentiles. */
export function plot(spec: PlotSpec): SchemeAnnotation[] {
  switch (spec.kind) {
    case "cdf":
      return plotCdf(spec);
    case "percentile_vs_k":
      return plotPercentileVsK(spec);
    case "sweep_cdf":
      return plotSweepCdf(spec);
    default:
      throw new Error(`unknown plot kind "${spec.kind}"`);
  }
}
