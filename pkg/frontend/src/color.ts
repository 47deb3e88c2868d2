/** Fixed viridis-style colormap and the log scaling used by the heatmap. */

import type { Rgb } from "./raster.js";

// Anchor colors of matplotlib's viridis at 9 equispaced stops.
const STOPS: Rgb[] = [
  [68, 1, 84],
  [72, 40, 120],
  [62, 74, 137],
  [49, 104, 142],
  [38, 130, 142],
  [31, 158, 137],
  [53, 183, 121],
  [109, 205, 89],
  [253, 231, 37],
];

/** Map t in [0, 1] to a color; values outside are clamped. */
export function viridis(t: number): Rgb {
  if (!Number.isFinite(t)) t = 0;
  const x = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(x));
  const f = x - i;
  const a = STOPS[i];
  const b = STOPS[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

/**
 * Log-scale normalizer over the finite positive values of a dataset.
 * Zeros and values below the floor map to 0; an all-equal dataset maps to 0.5.
 */
export function logNormalizer(values: number[]): (v: number) => number {
  const positive = values.filter((v) => Number.isFinite(v) && v > 0);
  if (positive.length === 0) {
    return () => 0.5;
  }
  const hi = Math.log10(Math.max(...positive));
  const lo = Math.log10(Math.min(...positive));
  if (hi === lo) {
    return (v) => (Number.isFinite(v) && v > 0 ? 0.5 : 0);
  }
  return (v) => {
    if (!Number.isFinite(v) || v <= 0) return 0;
    return (Math.log10(v) - lo) / (hi - lo);
  };
}
