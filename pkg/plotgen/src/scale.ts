export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  fn.ticks = () => {
    const step = niceStep(span / 5);
    const first = Math.ceil(d0 / step) * step;
    const out: number[] = [];
    for (let v = first; v <= d1 + 1e-12 * Math.abs(step); v += step) {
      out.push(roundTo(v, step));
    }
    return out;
  };
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  const fn = ((value: number) => r0 + ((Math.log10(value) - l0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  fn.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(l0); e <= Math.floor(Math.log10(d1)) + 1e-9; e++) {
      out.push(10 ** e);
    }
    return out.length >= 2 ? out : [d0, d1];
  };
  return fn;
}

function niceStep(rough: number): number {
  const power = 10 ** Math.floor(Math.log10(Math.abs(rough) || 1));
  const unit = rough / power;
  const nice = unit < 1.5 ? 1 : unit < 3.5 ? 2 : unit < 7.5 ? 5 : 10;
  return nice * power;
}

function roundTo(value: number, step: number): number {
  const digits = Math.max(0, -Math.floor(Math.log10(Math.abs(step))) + 1);
  return Number(value.toFixed(digits + 2));
}

export function extent(values: number[], padFraction = 0.0): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("extent of empty or non-finite data");
  }
  const pad = (hi - lo || Math.abs(hi) || 1) * padFraction;
  return [lo - pad, hi + pad];
}
