export { ECHO_HEADER, SPECTRUM_HEADER, detectKind, readEchoSeries, readSpectrum } from "./csv";
export { readAnnotations, readEchoFeatures, readSpectrumReport } from "./features";
export { renderLeOverlay, renderSpectrumScatter, DEFAULT_STYLE } from "./render";
export { linearScale, logScale, extent } from "./scale";
export { main, parseArgs, run } from "./cli";
