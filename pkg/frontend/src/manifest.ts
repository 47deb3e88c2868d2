/** Interpolation run manifest: the singular-value log and chosen rank. */

export interface SvdLog {
  r: number;
  svRow: number[];
  svCol: number[];
}

export function parseManifest(text: string): SvdLog {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (exc) {
    throw new Error(`manifest is not valid JSON: ${(exc as Error).message}`);
  }
  const obj = raw as Record<string, unknown>;
  const svRow = obj["sv_row"];
  const svCol = obj["sv_col"];
  const r = obj["r"];
  if (!Array.isArray(svRow) || !Array.isArray(svCol)) {
    throw new Error("manifest has no singular-value log (sv_row/sv_col)");
  }
  if (typeof r !== "number" || !Number.isInteger(r) || r < 1) {
    throw new Error("manifest has no valid truncation rank r");
  }
  const coerce = (vals: unknown[], name: string): number[] =>
    vals.map((v, i) => {
      if (typeof v !== "number" || !Number.isFinite(v) || v < 0) {
        throw new Error(`${name}[${i}] is not a nonnegative number`);
      }
      return v;
    });
  const row = coerce(svRow, "sv_row");
  const col = coerce(svCol, "sv_col");
  if (row.length === 0 || col.length === 0) {
    throw new Error("singular-value log is empty");
  }
  if (r > Math.max(row.length, col.length)) {
    throw new Error(`rank r=${r} exceeds the logged singular values`);
  }
  return { r, svRow: row, svCol: col };
}
