import { join } from "path";
import { describe, expect, it } from "vitest";
import { readEchoSeries, readSpectrum } from "../src/csv";
import { readEchoFeatures, readSpectrumReport } from "../src/features";
import { renderLeOverlay, renderSpectrumScatter } from "../src/render";

const SAMPLES = join(__dirname, "..", "sample_data");

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("echo overlay rendering", () => {
  const series = readEchoSeries(join(SAMPLES, "fig2_weak", "series.csv"));
  const features = readEchoFeatures(join(SAMPLES, "fig2_weak", "features.json"));

  it("draws the echo curve and both entropy curves", () => {
    const svg = renderLeOverlay(series, features, true);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(count(svg, "<polyline")).toBe(3);
  });

  it("marks minima and the plateau onset from the features file", () => {
    const svg = renderLeOverlay(series, features, true);
    expect(features.tMin.length).toBe(1);
    expect(count(svg, "t_min=")).toBe(1);
    expect(count(svg, "t_p=")).toBe(1);
  });

  it("shows two dips for the committed fig4b sample", () => {
    const series4b = readEchoSeries(join(SAMPLES, "fig4b_strong_half", "series.csv"));
    const features4b = readEchoFeatures(join(SAMPLES, "fig4b_strong_half", "features.json"));
    expect(features4b.tMin.length).toBe(2);
    const svg = renderLeOverlay(series4b, features4b, true);
    expect(count(svg, "t_min=")).toBe(2);
  });

  it("is deterministic", () => {
    const a = renderLeOverlay(series, features, true);
    const b = renderLeOverlay(series, features, true);
    expect(a).toBe(b);
  });

  it("renders without annotations", () => {
    const svg = renderLeOverlay(series, null, false);
    expect(count(svg, "<polyline")).toBe(3);
    expect(count(svg, "t_min=")).toBe(0);
  });
});

describe("spectrum scatter rendering", () => {
  const points = readSpectrum(join(SAMPLES, "spectrum", "spectrum_all.csv"));
  const report = readSpectrumReport(join(SAMPLES, "spectrum", "spectrum_all.json"));

  it("draws one point per eigenvalue", () => {
    const svg = renderSpectrumScatter(points, report);
    expect(count(svg, "<circle")).toBe(64);
  });

  it("shades one band per segment", () => {
    const svg = renderSpectrumScatter(points, report);
    // background rect + one band per segment
    expect(count(svg, "<rect")).toBe(1 + report.segments.length);
    expect(report.segments.length).toBeGreaterThanOrEqual(2);
  });

  it("prints the degeneracy summary", () => {
    const svg = renderSpectrumScatter(points, report);
    expect(svg).toContain("zero modes of dissipative part: 1");
  });
});
