/**
 * Semilog-y decay plot of the two truncation SVDs with the chosen rank
 * marked by a vertical line after the r-th singular value.
 */

import type { SvdLog } from "./manifest.js";
import { Raster, type Rgb } from "./raster.js";

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = 30;
export const ROW_COLOR: Rgb = [0, 90, 200];
export const COL_COLOR: Rgb = [0, 150, 80];
export const RANK_COLOR: Rgb = [220, 30, 30];
const BORDER_COLOR: Rgb = [0, 0, 0];

/** Relative floor for zero/denormal singular values on the log axis. */
const LOG_FLOOR_REL = 1e-18;

export function xForIndex(i: number, count: number): number {
  return Math.round(MARGIN + ((i + 0.5) * (WIDTH - 2 * MARGIN)) / count);
}

/** x pixel of the vertical rank marker: the boundary after the r-th value. */
export function xForRankBoundary(r: number, count: number): number {
  return Math.round(MARGIN + (r * (WIDTH - 2 * MARGIN)) / count);
}

export function renderSvdPlot(log: SvdLog): Raster {
  const raster = new Raster(WIDTH, HEIGHT);
  const count = Math.max(log.svRow.length, log.svCol.length);

  const top = Math.max(...log.svRow, ...log.svCol);
  if (!(top > 0)) {
    throw new Error("singular-value log is identically zero");
  }
  const floor = top * LOG_FLOOR_REL;
  const logs = [...log.svRow, ...log.svCol].map((v) => Math.log10(Math.max(v, floor)));
  const hi = Math.max(...logs);
  const lo = Math.min(...logs);
  const span = hi === lo ? 1 : hi - lo;
  const yFor = (v: number): number => {
    const t = (Math.log10(Math.max(v, floor)) - lo) / span;
    return Math.round(HEIGHT - MARGIN - t * (HEIGHT - 2 * MARGIN));
  };

  const mark = (values: number[], color: Rgb, size: number) => {
    values.forEach((v, i) => {
      const x = xForIndex(i, count);
      const y = yFor(v);
      raster.fillRect(x - (size >> 1), y - (size >> 1), size, size, color);
    });
  };
  mark(log.svRow, ROW_COLOR, 5);
  mark(log.svCol, COL_COLOR, 3);

  const xr = xForRankBoundary(log.r, count);
  raster.fillRect(xr - 1, MARGIN, 2, HEIGHT - 2 * MARGIN, RANK_COLOR);

  raster.strokeRect(MARGIN - 1, MARGIN - 1, WIDTH - 2 * MARGIN + 2, HEIGHT - 2 * MARGIN + 2, BORDER_COLOR);
  return raster;
}
