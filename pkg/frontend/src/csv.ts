/**
 * Reader for the simulator's sweep CSV schema (sweep-v1):
 *
 *   K,kappa_db,macro_sum_mean,macro_sum_stderr,femto_sum_mean,femto_sum_stderr,n_drops
 *
 * The schema is validated column by column; a mismatch names the offending
 * column.  kappa_db may be "-Infinity" (kappa = 0 rows).
 */

export const SWEEP_COLUMNS = [
  "K",
  "kappa_db",
  "macro_sum_mean",
  "macro_sum_stderr",
  "femto_sum_mean",
  "femto_sum_stderr",
  "n_drops",
] as const;

export interface SweepRow {
  K: number;
  kappa_db: number;
  macro_sum_mean: number;
  macro_sum_stderr: number;
  femto_sum_mean: number;
  femto_sum_stderr: number;
  n_drops: number;
}

export class CsvSchemaError extends Error {}

function parseNumber(token: string, column: string, line: number): number {
  if (token === "Infinity" || token === "-Infinity") {
    return token === "Infinity" ? Infinity : -Infinity;
  }
  const value = Number(token);
  if (token.trim() === "" || Number.isNaN(value)) {
    throw new CsvSchemaError(
      `line ${line}: column "${column}" has non-numeric value "${token}"`,
    );
  }
  return value;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty file: missing header row");
  }
  const header = lines[0].split(",");
  SWEEP_COLUMNS.forEach((expected, i) => {
    if (header[i] !== expected) {
      throw new CsvSchemaError(
        `header column ${i + 1}: expected "${expected}", got "${header[i] ?? ""}"`,
      );
    }
  });
  if (header.length !== SWEEP_COLUMNS.length) {
    throw new CsvSchemaError(
      `header has ${header.length} columns, expected ${SWEEP_COLUMNS.length}`,
    );
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const tokens = lines[i].split(",");
    if (tokens.length !== SWEEP_COLUMNS.length) {
      throw new CsvSchemaError(
        `line ${i + 1}: ${tokens.length} fields, expected ${SWEEP_COLUMNS.length}`,
      );
    }
    rows.push({
      K: parseNumber(tokens[0], "K", i + 1),
      kappa_db: parseNumber(tokens[1], "kappa_db", i + 1),
      macro_sum_mean: parseNumber(tokens[2], "macro_sum_mean", i + 1),
      macro_sum_stderr: parseNumber(tokens[3], "macro_sum_stderr", i + 1),
      femto_sum_mean: parseNumber(tokens[4], "femto_sum_mean", i + 1),
      femto_sum_stderr: parseNumber(tokens[5], "femto_sum_stderr", i + 1),
      n_drops: parseNumber(tokens[6], "n_drops", i + 1),
    });
  }
  return rows;
}

/** Stable unique K values in first-appearance order. */
export function kValues(rows: SweepRow[]): number[] {
  const seen: number[] = [];
  for (const row of rows) {
    if (!seen.includes(row.K)) seen.push(row.K);
  }
  return seen;
}
