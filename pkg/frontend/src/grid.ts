/**
 * Error-grid CSV parsing and validation.
 *
 * Expected contract: header `omega,p,delta,formula,cond_estimate`, one row
 * per grid cell, full double precision, and the (omega, p) pairs forming a
 * complete rectangular grid. `delta` and `cond_estimate` may be `nan`/`inf`
 * for failed or singular cells.
 */

export const HEADER = ["omega", "p", "delta", "formula", "cond_estimate"] as const;

export interface GridFile {
  /** Ascending frequency values (grid rows as written). */
  omegas: number[];
  /** Ascending parameter values. */
  params: number[];
  /** delta[i][j] at (omegas[i], params[j]). */
  delta: number[][];
  /** Formula flag per cell, same layout. */
  formula: string[][];
  /** Condition estimate per cell, same layout. */
  cond: number[][];
}

const FLOAT_RE = /^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$/;

function parseFloatStrict(token: string, where: string): number {
  const t = token.trim();
  const lower = t.toLowerCase();
  if (lower === "nan") return NaN;
  if (lower === "inf" || lower === "infinity") return Infinity;
  if (lower === "-inf" || lower === "-infinity") return -Infinity;
  if (!FLOAT_RE.test(t)) {
    throw new Error(`${where}: cannot parse ${JSON.stringify(token)} as a number`);
  }
  return Number(t);
}

export function parseErrorGrid(text: string): GridFile {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new Error("empty grid file");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (header.join(",") !== HEADER.join(",")) {
    throw new Error(
      `unexpected header ${JSON.stringify(lines[0])}; expected "${HEADER.join(",")}"`,
    );
  }

  interface Cell {
    delta: number;
    formula: string;
    cond: number;
  }
  const cells = new Map<string, Cell>();
  const omegaSet: number[] = [];
  const paramSet: number[] = [];

  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(",");
    if (parts.length !== HEADER.length) {
      throw new Error(`line ${k + 1}: expected ${HEADER.length} fields, got ${parts.length}`);
    }
    const where = `line ${k + 1}`;
    const omega = parseFloatStrict(parts[0], where);
    const p = parseFloatStrict(parts[1], where);
    if (!Number.isFinite(omega) || !Number.isFinite(p)) {
      throw new Error(`${where}: grid coordinates must be finite`);
    }
    const key = `${omega}|${p}`;
    if (cells.has(key)) {
      throw new Error(`${where}: duplicate cell omega=${omega}, p=${p}`);
    }
    cells.set(key, {
      delta: parseFloatStrict(parts[2], where),
      formula: parts[3].trim(),
      cond: parseFloatStrict(parts[4], where),
    });
    if (!omegaSet.includes(omega)) omegaSet.push(omega);
    if (!paramSet.includes(p)) paramSet.push(p);
  }

  const omegas = [...omegaSet].sort((a, b) => a - b);
  const params = [...paramSet].sort((a, b) => a - b);

  const missing: string[] = [];
  for (const w of omegas) {
    for (const p of params) {
      if (!cells.has(`${w}|${p}`)) {
        missing.push(`(omega=${w}, p=${p})`);
      }
    }
  }
  if (missing.length > 0) {
    throw new Error(
      `grid is not rectangular; missing ${missing.length} cell(s): ` +
        missing.slice(0, 8).join(", ") +
        (missing.length > 8 ? ", ..." : ""),
    );
  }

  const delta = omegas.map((w) => params.map((p) => cells.get(`${w}|${p}`)!.delta));
  const formula = omegas.map((w) => params.map((p) => cells.get(`${w}|${p}`)!.formula));
  const cond = omegas.map((w) => params.map((p) => cells.get(`${w}|${p}`)!.cond));
  return { omegas, params, delta, formula, cond };
}
