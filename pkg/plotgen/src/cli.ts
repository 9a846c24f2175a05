#!/usr/bin/env node
/**
 * plotgen <features.json> <series.csv> -o fig.svg [--kind le_overlay|spectrum_scatter]
 *         [--linear-x]
 *
 * The CSV header decides the plot kind unless --kind overrides it; the JSON
 * carries echo features (marker annotations) or the spectrum report (segment
 * bands). Output is a standalone SVG.
 */

import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";
import { detectKind, readEchoSeries, readSpectrum } from "./csv";
import { readAnnotations } from "./features";
import { renderLeOverlay, renderSpectrumScatter } from "./render";

export interface CliArgs {
  featuresPath: string;
  csvPath: string;
  output: string;
  kind: "le_overlay" | "spectrum_scatter" | null;
  logX: boolean;
}

export function parseArgs(argv: string[]): CliArgs {
  const positional: string[] = [];
  let output: string | null = null;
  let kind: CliArgs["kind"] = null;
  let logX = true;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--output") {
      output = argv[++i];
    } else if (arg === "--kind") {
      const value = argv[++i];
      if (value !== "le_overlay" && value !== "spectrum_scatter") {
        throw new Error(`--kind must be le_overlay or spectrum_scatter, got ${value}`);
      }
      kind = value;
    } else if (arg === "--linear-x") {
      logX = false;
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown option ${arg}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 2 || output === null) {
    throw new Error("usage: plotgen <features.json> <series.csv> -o <fig.svg>");
  }
  return { featuresPath: positional[0], csvPath: positional[1], output, kind, logX };
}

export function run(args: CliArgs): string {
  const kind = args.kind ?? detectKind(args.csvPath);
  let svg: string;
  if (kind === "le_overlay") {
    const series = readEchoSeries(args.csvPath);
    const annotations = readAnnotations(args.featuresPath);
    if (annotations.kind !== "echo") {
      throw new Error(`${args.featuresPath}: echo overlay needs an echo features JSON`);
    }
    svg = renderLeOverlay(series, annotations.features, args.logX);
  } else {
    const points = readSpectrum(args.csvPath);
    const annotations = readAnnotations(args.featuresPath);
    if (annotations.kind !== "spectrum") {
      throw new Error(`${args.featuresPath}: spectrum scatter needs a spectrum report JSON`);
    }
    svg = renderSpectrumScatter(points, annotations.report);
  }
  mkdirSync(dirname(args.output), { recursive: true });
  writeFileSync(args.output, svg, "utf-8");
  return args.output;
}

export function main(argv: string[]): number {
  try {
    const written = run(parseArgs(argv));
    console.log(written);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
