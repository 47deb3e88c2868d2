/** Tiny RGB pixel canvas with the handful of primitives the plots need. */

export type Rgb = readonly [number, number, number];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Rgb = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 3);
    this.fillRect(0, 0, width, height, background);
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const k = (y * this.width + x) * 3;
    this.data[k] = color[0];
    this.data[k + 1] = color[1];
    this.data[k + 2] = color[2];
  }

  get(x: number, y: number): Rgb {
    const k = (y * this.width + x) * 3;
    return [this.data[k], this.data[k + 1], this.data[k + 2]];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    const x1 = Math.min(this.width, x0 + w);
    const y1 = Math.min(this.height, y0 + h);
    for (let y = Math.max(0, y0); y < y1; y++) {
      for (let x = Math.max(0, x0); x < x1; x++) {
        this.set(x, y, color);
      }
    }
  }

  /** 1px rectangle outline. */
  strokeRect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    this.fillRect(x0, y0, w, 1, color);
    this.fillRect(x0, y0 + h - 1, w, 1, color);
    this.fillRect(x0, y0, 1, h, color);
    this.fillRect(x0 + w - 1, y0, 1, h, color);
  }

  /** Count pixels of an exact color (test helper). */
  count(color: Rgb): number {
    let total = 0;
    for (let k = 0; k < this.data.length; k += 3) {
      if (
        this.data[k] === color[0] &&
        this.data[k + 1] === color[1] &&
        this.data[k + 2] === color[2]
      ) {
        total++;
      }
    }
    return total;
  }
}
