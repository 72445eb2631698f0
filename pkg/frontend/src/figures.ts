/**
 * The three figure kinds over sweep CSVs:
 *
 *  - tradeoff-per-K:   one curve per K from a single sweep file;
 *  - pareto-compare:   one Pareto boundary per input file (e.g. colocated
 *                      vs uniform scheduling);
 *  - iteration-family: one curve per input file, each a reverse-slot sweep
 *                      at a fixed power-control iteration count.
 *
 * Axes follow the tradeoff-region convention: macrocell sum throughput on
 * x, femtocell sum throughput on y, both bit/s/Hz, with standard-error
 * bars on both axes.
 */

import { basename } from "node:path";

import { kValues, parseSweepCsv, SweepRow } from "./csv.js";
import { FigureLayout, renderFigure, Series } from "./svg.js";

export const FIGURE_KINDS = ["tradeoff-per-K", "pareto-compare", "iteration-family"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureInput {
  path: string;
  text: string;
  label?: string;
}

export interface FigureOptions {
  kind: FigureKind;
  inputs: FigureInput[];
  k?: number;
  title?: string;
  width?: number;
  height?: number;
}

export interface Figure {
  svg: string;
  series: Series[];
}

function toPoints(rows: SweepRow[]) {
  return rows.map((r) => ({
    x: r.macro_sum_mean,
    y: r.femto_sum_mean,
    xErr: r.macro_sum_stderr,
    yErr: r.femto_sum_stderr,
  }));
}

function defaultLabel(input: FigureInput): string {
  const name = basename(input.path).replace(/\.csv$/, "");
  const iter = name.match(/iter(\d+)/);
  if (iter) return `${iter[1]} iterations`;
  const mode = name.match(/(colocated|uniform)/);
  if (mode) return mode[1];
  return name;
}

function requireRows(rows: SweepRow[], path: string): void {
  if (rows.length === 0) {
    throw new Error(`no data rows in ${path}: nothing to plot`);
  }
}

export function buildFigure(options: FigureOptions): Figure {
  const { kind, inputs } = options;
  let series: Series[] = [];

  if (kind === "tradeoff-per-K") {
    if (inputs.length !== 1) {
      throw new Error("tradeoff-per-K takes exactly one input CSV");
    }
    const rows = parseSweepCsv(inputs[0].text);
    requireRows(rows, inputs[0].path);
    series = kValues(rows).map((k) => ({
      label: `K = ${k}`,
      points: toPoints(rows.filter((r) => r.K === k)),
    }));
  } else if (kind === "pareto-compare") {
    if (inputs.length < 2) {
      throw new Error("pareto-compare takes two or more input CSVs");
    }
    series = inputs.map((input) => {
      const rows = parseSweepCsv(input.text);
      requireRows(rows, input.path);
      return { label: input.label ?? defaultLabel(input), points: toPoints(rows) };
    });
  } else if (kind === "iteration-family") {
    if (inputs.length < 1) {
      throw new Error("iteration-family takes one or more input CSVs");
    }
    series = inputs.map((input) => {
      let rows = parseSweepCsv(input.text);
      requireRows(rows, input.path);
      if (options.k !== undefined) {
        rows = rows.filter((r) => r.K === options.k);
        requireRows(rows, `${input.path} (K=${options.k})`);
      } else if (kValues(rows).length > 1) {
        throw new Error(
          `${input.path} contains multiple K values; pass --k to select one`,
        );
      }
      return { label: input.label ?? defaultLabel(input), points: toPoints(rows) };
    });
  } else {
    throw new Error(`unknown figure kind "${kind}"`);
  }

  const layout: FigureLayout = {
    width: options.width ?? 720,
    height: options.height ?? 520,
    title: options.title ?? kind,
    xLabel: "macrocell sum throughput [bit/s/Hz]",
    yLabel: "femtocell sum throughput [bit/s/Hz]",
  };
  return { svg: renderFigure(series, layout), series };
}
