/**
 * Sample statistics, using the same conventions as the simulator so
 * figures annotated here agree with its summary files.
 */

export class StatsError extends Error {}

/**
 * Empirical quantile with linear interpolation on order statistics:
 * sorted sample i (0-based, n samples) sits at position i/(n-1).
 */
export function percentile(samples: number[], p: number): number {
  if (samples.length === 0) throw new StatsError("percentile of empty sample set");
  if (!(p > 0 && p < 1)) throw new StatsError("p must lie strictly between 0 and 1");
  const s = [...samples].sort((a, b) => a - b);
  if (s.length === 1) return s[0];
  const pos = p * (s.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.min(lo + 1, s.length - 1);
  const frac = pos - lo;
  return s[lo] + frac * (s[hi] - s[lo]);
}

/**
 * Empirical CDF of the pooled samples: point i (0-based, sorted) is
 * plotted at height (i+1)/n, so curves start at 1/n and end at 1.
 */
export function ecdf(samples: number[]): { x: number[]; y: number[] } {
  if (samples.length === 0) throw new StatsError("ecdf of empty sample set");
  const x = [...samples].sort((a, b) => a - b);
  const n = x.length;
  const y = x.map((_, i) => (i + 1) / n);
  return { x, y };
}
