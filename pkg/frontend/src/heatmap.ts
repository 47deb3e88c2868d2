/**
 * Log-colored heatmap of delta(omega, p) with the formula-switch frontier
 * drawn in yellow on every edge where the flag changes between neighboring
 * cells. Frequency runs left to right, parameter bottom to top.
 */

import { logNormalizer, viridis } from "./color.js";
import type { GridFile } from "./grid.js";
import { Raster, type Rgb } from "./raster.js";

export const MARGIN = 12;
export const FRONTIER_COLOR: Rgb = [255, 220, 0];
export const FAILED_COLOR: Rgb = [128, 128, 128];
const BORDER_COLOR: Rgb = [0, 0, 0];

export function cellSize(count: number, target: number): number {
  return Math.max(4, Math.floor(target / count));
}

export function renderHeatmap(grid: GridFile): Raster {
  const nx = grid.omegas.length;
  const ny = grid.params.length;
  const cw = cellSize(nx, 720);
  const ch = cellSize(ny, 480);
  const raster = new Raster(nx * cw + 2 * MARGIN, ny * ch + 2 * MARGIN);

  const scale = logNormalizer(grid.delta.flat());
  const x0 = (i: number) => MARGIN + i * cw;
  const y0 = (j: number) => MARGIN + (ny - 1 - j) * ch;

  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      const d = grid.delta[i][j];
      const color = Number.isNaN(d) ? FAILED_COLOR : viridis(scale(d));
      raster.fillRect(x0(i), y0(j), cw, ch, color);
    }
  }

  // Formula-switch frontier: mark shared edges of cells with differing flags.
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      if (i + 1 < nx && grid.formula[i][j] !== grid.formula[i + 1][j]) {
        raster.fillRect(x0(i + 1) - 1, y0(j), 2, ch, FRONTIER_COLOR);
      }
      if (j + 1 < ny && grid.formula[i][j] !== grid.formula[i][j + 1]) {
        raster.fillRect(x0(i), y0(j) - 1, cw, 2, FRONTIER_COLOR);
      }
    }
  }

  raster.strokeRect(MARGIN - 1, MARGIN - 1, nx * cw + 2, ny * ch + 2, BORDER_COLOR);
  return raster;
}
