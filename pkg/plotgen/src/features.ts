import { readFileSync } from "fs";

export interface EchoFeatures {
  tMin: Array<{ t: number; value: number }>;
  tMax: Array<{ t: number; value: number }>;
  tPlateau: number | null;
  regimeLabel: string;
}

export interface SpectrumSegment {
  centerImag: number;
  widthImag: number;
  count: number;
}

export interface SpectrumReport {
  segments: SpectrumSegment[];
  hdZeroDegeneracy: number;
  gapRatio: number;
  segmented: boolean;
}

function asPairList(raw: unknown, name: string): Array<{ t: number; value: number }> {
  if (!Array.isArray(raw)) throw new Error(`features: ${name} must be a list`);
  return raw.map((entry, i) => {
    if (!Array.isArray(entry) || entry.length !== 2) {
      throw new Error(`features: ${name}[${i}] must be a [time, value] pair`);
    }
    return { t: Number(entry[0]), value: Number(entry[1]) };
  });
}

export function readEchoFeatures(path: string): EchoFeatures {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if (!("t_min_list" in raw)) {
    throw new Error(`${path}: not an echo features file (missing t_min_list)`);
  }
  return {
    tMin: asPairList(raw.t_min_list, "t_min_list"),
    tMax: asPairList(raw.t_max_list ?? [], "t_max_list"),
    tPlateau: raw.t_plateau === null || raw.t_plateau === undefined ? null : Number(raw.t_plateau),
    regimeLabel: String(raw.regime_label ?? ""),
  };
}

export function readSpectrumReport(path: string): SpectrumReport {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if (!("segments" in raw)) {
    throw new Error(`${path}: not a spectrum report (missing segments)`);
  }
  const segments = (raw.segments as Array<Record<string, unknown>>).map((s) => ({
    centerImag: Number(s.center_imag),
    widthImag: Number(s.width_imag),
    count: Number(s.count),
  }));
  return {
    segments,
    hdZeroDegeneracy: Number(raw.hd_zero_degeneracy ?? 0),
    gapRatio: Number(raw.gap_ratio ?? 0),
    segmented: Boolean(raw.segmented),
  };
}

/** Accept either metadata flavor; tell the renderer which one it got. */
export function readAnnotations(path: string):
  | { kind: "echo"; features: EchoFeatures }
  | { kind: "spectrum"; report: SpectrumReport } {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if ("t_min_list" in raw) return { kind: "echo", features: readEchoFeatures(path) };
  if ("segments" in raw) return { kind: "spectrum", report: readSpectrumReport(path) };
  throw new Error(`${path}: neither echo features nor spectrum report`);
}
