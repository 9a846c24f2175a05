import { readFileSync } from "fs";

export interface EchoSeries {
  t: number[];
  le: number[];
  renyi2G1: number[];
  renyi2G2: number[];
}

export interface SpectrumPoints {
  re: number[];
  im: number[];
}

export const ECHO_HEADER = "t,le,renyi2_g1,renyi2_g2";
export const SPECTRUM_HEADER = "re,im";

function splitRows(text: string): string[][] {
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

function parseNumeric(rows: string[][], nCols: number, source: string): number[][] {
  const cols: number[][] = Array.from({ length: nCols }, () => []);
  for (let r = 1; r < rows.length; r++) {
    if (rows[r].length !== nCols) {
      throw new Error(`${source}: row ${r + 1} has ${rows[r].length} fields, expected ${nCols}`);
    }
    for (let c = 0; c < nCols; c++) {
      const value = Number(rows[r][c]);
      if (!Number.isFinite(value)) {
        throw new Error(`${source}: non-numeric value "${rows[r][c]}" at row ${r + 1}`);
      }
      cols[c].push(value);
    }
  }
  if (cols[0].length === 0) {
    throw new Error(`${source}: no data rows`);
  }
  return cols;
}

export function detectKind(path: string): "le_overlay" | "spectrum_scatter" {
  const header = readFileSync(path, "utf-8").split("\n", 1)[0].trim();
  if (header === ECHO_HEADER) return "le_overlay";
  if (header === SPECTRUM_HEADER) return "spectrum_scatter";
  throw new Error(`unrecognized CSV header "${header}" in ${path}`);
}

export function readEchoSeries(path: string): EchoSeries {
  const rows = splitRows(readFileSync(path, "utf-8"));
  if (rows[0].join(",") !== ECHO_HEADER) {
    throw new Error(`${path}: expected header "${ECHO_HEADER}", got "${rows[0].join(",")}"`);
  }
  const [t, le, renyi2G1, renyi2G2] = parseNumeric(rows, 4, path);
  return { t, le, renyi2G1, renyi2G2 };
}

export function readSpectrum(path: string): SpectrumPoints {
  const rows = splitRows(readFileSync(path, "utf-8"));
  if (rows[0].join(",") !== SPECTRUM_HEADER) {
    throw new Error(`${path}: expected header "${SPECTRUM_HEADER}", got "${rows[0].join(",")}"`);
  }
  const [re, im] = parseNumeric(rows, 2, path);
  return { re, im };
}
