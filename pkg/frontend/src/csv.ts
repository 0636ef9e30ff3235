/**
 * Reader for the simulator's sample CSV dialect:
 * comma-separated, UTF-8, "." decimals, LF line endings, mandatory
 * header `scheme,trial,realization,user,rate_bps_hz`.
 */

import { readFileSync } from "fs";

export interface RateSample {
  scheme: string;
  trial: number;
  realization: number;
  user: number;
  rate: number;
}

export const HEADER = "scheme,trial,realization,user,rate_bps_hz";

export class CsvFormatError extends Error {}

/** Parse one samples.csv file; errors name the offending 1-based row. */
export function readSamples(path: string): RateSample[] {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n");
  if (lines[0] !== HEADER) {
    throw new CsvFormatError(`${path}: row 1: expected header "${HEADER}"`);
  }
  const samples: RateSample[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === "" && i === lines.length - 1) break; // trailing newline
    const row = i + 1;
    const parts = line.split(",");
    if (parts.length !== 5) {
      throw new CsvFormatError(`${path}: row ${row}: expected 5 fields, got ${parts.length}`);
    }
    const [scheme, trial, realization, user, rate] = parts;
    const t = Number(trial);
    const r = Number(realization);
    const u = Number(user);
    const v = Number(rate);
    if (!Number.isInteger(t) || !Number.isInteger(r) || !Number.isInteger(u)) {
      throw new CsvFormatError(`${path}: row ${row}: non-integer index field`);
    }
    if (rate === "" || Number.isNaN(v)) {
      throw new CsvFormatError(`${path}: row ${row}: invalid rate "${rate}"`);
    }
    samples.push({ scheme, trial: t, realization: r, user: u, rate: v });
  }
  if (samples.length === 0) {
    throw new CsvFormatError(`${path}: no sample rows`);
  }
  return samples;
}

/** Group pooled rates by scheme, preserving first-seen scheme order. */
export function poolByScheme(samples: RateSample[], filter?: string[]): Map<string, number[]> {
  const pools = new Map<string, number[]>();
  for (const s of samples) {
    if (filter && !filter.includes(s.scheme)) continue;
    let pool = pools.get(s.scheme);
    if (!pool) {
      pool = [];
      pools.set(s.scheme, pool);
    }
    pool.push(s.rate);
  }
  if (pools.size === 0) {
    throw new CsvFormatError(
      filter ? `scheme filter [${filter.join(", ")}] matches no samples`
             : "no samples to pool");
  }
  return pools;
}

/** Read selected keys of a run summary file (`scheme.metric = value`). */
export function readSummary(path: string): Map<string, number> {
  const out = new Map<string, number>();
  for (const line of readFileSync(path, "utf-8").split("\n")) {
    if (!line.trim()) continue;
    const [key, value] = line.split(" = ");
    out.set(key, Number(value));
  }
  return out;
}

/** Read a run manifest (JSON) written next to a samples file. */
export function readManifest(path: string): { config: Record<string, unknown> } {
  return JSON.parse(readFileSync(path, "utf-8"));
}
