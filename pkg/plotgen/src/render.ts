import { EchoSeries, SpectrumPoints } from "./csv";
import { EchoFeatures, SpectrumReport } from "./features";
import { Scale, extent, linearScale, logScale } from "./scale";
import { SvgDoc, tickLabel } from "./svg";

export interface PlotStyle {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_STYLE: PlotStyle = {
  width: 720,
  height: 440,
  margin: { top: 36, right: 64, bottom: 52, left: 64 },
};

const LE_COLOR = "#2e7d32";
const RENYI1_COLOR = "#1565c0";
const RENYI2_COLOR = "#c62828";
const MARKER_COLOR = "#555555";
const BAND_COLOR = "#90caf9";
const POINT_COLOR = "#4527a0";

function drawXAxis(doc: SvgDoc, x: Scale, y0: number, label: string): void {
  doc.line(x.range[0], y0, x.range[1], y0, "#222");
  for (const t of x.ticks()) {
    const px = x(t);
    doc.line(px, y0, px, y0 + 4, "#222");
    doc.text(px, y0 + 16, tickLabel(t), { anchor: "middle" });
  }
  doc.text((x.range[0] + x.range[1]) / 2, y0 + 36, label, { anchor: "middle", size: 13 });
}

function drawYAxis(doc: SvgDoc, y: Scale, x0: number, label: string, color: string,
                   side: "left" | "right"): void {
  doc.line(x0, y.range[0], x0, y.range[1], "#222");
  const sign = side === "left" ? -1 : 1;
  for (const t of y.ticks()) {
    const py = y(t);
    doc.line(x0, py, x0 + sign * 4, py, "#222");
    doc.text(x0 + sign * 8, py + 4, tickLabel(t),
             { anchor: side === "left" ? "end" : "start" });
  }
  const lx = x0 + sign * 46;
  const ly = (y.range[0] + y.range[1]) / 2;
  doc.text(lx, ly, label, { anchor: "middle", size: 13, fill: color, rotate: -90 });
}

/** Echo curve on the left axis with both entropy curves on a twin right axis. */
export function renderLeOverlay(series: EchoSeries, features: EchoFeatures | null,
                                logX: boolean, style: PlotStyle = DEFAULT_STYLE): string {
  const doc = new SvgDoc(style.width, style.height);
  const { margin } = style;
  const xRange: [number, number] = [margin.left, style.width - margin.right];
  const yRange: [number, number] = [style.height - margin.bottom, margin.top];
  const x = logX ? logScale(extent(series.t), xRange) : linearScale(extent(series.t), xRange);
  const yLe = linearScale([0, 1.05], yRange);
  const entropyMax = Math.max(...series.renyi2G1, ...series.renyi2G2, 0.1);
  const yS = linearScale([0, entropyMax * 1.05], yRange);

  if (features !== null) {
    for (const m of features.tMin) {
      doc.line(x(m.t), yRange[0], x(m.t), yRange[1], MARKER_COLOR, { dash: "4 3" });
      doc.text(x(m.t) + 3, yRange[1] + 12, `t_min=${tickLabel(m.t)}`, { size: 10, fill: MARKER_COLOR });
    }
    if (features.tPlateau !== null && features.tPlateau >= x.domain[0]
        && features.tPlateau <= x.domain[1]) {
      const px = x(features.tPlateau);
      doc.line(px, yRange[0], px, yRange[1], MARKER_COLOR, { dash: "1 3" });
      doc.text(px + 3, yRange[1] + 24, `t_p=${tickLabel(features.tPlateau)}`,
               { size: 10, fill: MARKER_COLOR });
    }
  }

  doc.polyline(series.t.map(x), series.le.map(yLe), LE_COLOR, { width: 2 });
  doc.polyline(series.t.map(x), series.renyi2G1.map(yS), RENYI1_COLOR, { dash: "5 3" });
  doc.polyline(series.t.map(x), series.renyi2G2.map(yS), RENYI2_COLOR, { dash: "5 3" });

  drawXAxis(doc, x, yRange[0], logX ? "t J (log)" : "t J");
  drawYAxis(doc, yLe, xRange[0], "echo", LE_COLOR, "left");
  drawYAxis(doc, yS, xRange[1], "second Renyi entropy", RENYI2_COLOR, "right");

  doc.text(xRange[0], margin.top - 16, "echo", { fill: LE_COLOR, size: 12 });
  doc.text(xRange[0] + 60, margin.top - 16, "S2 (gamma1)", { fill: RENYI1_COLOR, size: 12 });
  doc.text(xRange[0] + 160, margin.top - 16, "S2 (gamma2)", { fill: RENYI2_COLOR, size: 12 });
  return doc.render();
}

/** Complex-plane scatter of the Lindblad spectrum with segment bands. */
export function renderSpectrumScatter(points: SpectrumPoints, report: SpectrumReport | null,
                                      style: PlotStyle = DEFAULT_STYLE): string {
  const doc = new SvgDoc(style.width, style.height);
  const { margin } = style;
  const xRange: [number, number] = [margin.left, style.width - margin.right];
  const yRange: [number, number] = [style.height - margin.bottom, margin.top];
  const x = linearScale(extent(points.re, 0.08), xRange);
  const y = linearScale(extent(points.im, 0.08), yRange);

  if (report !== null) {
    for (const seg of report.segments) {
      const half = Math.max(seg.widthImag / 2, (y.domain[1] - y.domain[0]) / 400);
      const top = y(seg.centerImag + half);
      const bottom = y(seg.centerImag - half);
      doc.rect(xRange[0], top, xRange[1] - xRange[0], bottom - top, BAND_COLOR, 0.35);
      doc.text(xRange[1] + 4, (top + bottom) / 2 + 3, `n=${seg.count}`,
               { size: 9, fill: "#444" });
    }
  }
  for (let i = 0; i < points.re.length; i++) {
    doc.circle(x(points.re[i]), y(points.im[i]), 2.6, POINT_COLOR, 0.85);
  }
  drawXAxis(doc, x, yRange[0], "Re(eigenvalue) / J");
  drawYAxis(doc, y, xRange[0], "Im(eigenvalue) / J", "#222", "left");
  if (report !== null) {
    doc.text(xRange[0], margin.top - 16,
             `segments: ${report.segments.length}, gap ratio: ${tickLabel(report.gapRatio)}, ` +
             `zero modes of dissipative part: ${report.hdZeroDegeneracy}`,
             { size: 12 });
  }
  return doc.render();
}
