#!/usr/bin/env node
/**
 * Figure generator for simulator sweep CSVs.
 *
 * Usage:
 *   node dist/plot.js --kind tradeoff-per-K --input sweep_colocated_dl.csv --out fig.svg
 *   node dist/plot.js --kind pareto-compare --input pareto_colocated_dl.csv \
 *       --input pareto_uniform_dl.csv --out compare.svg
 *   node dist/plot.js --kind iteration-family --k 6 \
 *       --input sweep_colocated_ul_iter3.csv --input sweep_colocated_ul_iter6.csv \
 *       --input sweep_colocated_ul_iter20.csv --out family.svg
 *
 * Inputs are read-only; the figure is written only if every input parses
 * against the sweep-v1 schema.  Exit codes: 0 ok, 1 usage/validation error.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { buildFigure, FIGURE_KINDS, FigureKind, FigureInput } from "./figures.js";

interface Args {
  kind?: string;
  inputs: string[];
  labels: string[];
  out?: string;
  k?: number;
  title?: string;
  width?: number;
  height?: number;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { inputs: [], labels: [] };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[i];
    };
    switch (flag) {
      case "--kind": args.kind = next(); break;
      case "--input": args.inputs.push(next()); break;
      case "--label": args.labels.push(next()); break;
      case "--out": args.out = next(); break;
      case "--k": args.k = Number(next()); break;
      case "--title": args.title = next(); break;
      case "--width": args.width = Number(next()); break;
      case "--height": args.height = Number(next()); break;
      default: throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    if (!args.kind || !(FIGURE_KINDS as readonly string[]).includes(args.kind)) {
      throw new Error(`--kind must be one of: ${FIGURE_KINDS.join(", ")}`);
    }
    if (args.inputs.length === 0) throw new Error("at least one --input is required");
    if (!args.out) throw new Error("--out is required");

    const inputs: FigureInput[] = args.inputs.map((path, i) => ({
      path,
      text: readFileSync(path, "utf8"),
      label: args.labels[i],
    }));
    const figure = buildFigure({
      kind: args.kind as FigureKind,
      inputs,
      k: args.k,
      title: args.title,
      width: args.width,
      height: args.height,
    });
    writeFileSync(args.out, figure.svg);
    const n = figure.series.reduce((acc, s) => acc + s.points.length, 0);
    console.log(`wrote ${args.out}: ${figure.series.length} series, ${n} points`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("plot.js")) {
  process.exit(main(process.argv.slice(2)));
}
