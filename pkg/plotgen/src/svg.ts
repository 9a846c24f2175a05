/** Minimal deterministic SVG assembly: fragments in, one document out. */

const XML_ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function escapeXml(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => XML_ESCAPES[ch]);
}

export function fmt(value: number): string {
  return Number(value.toFixed(3)).toString();
}

export class SvgDoc {
  readonly width: number;
  readonly height: number;
  private parts: string[] = [];

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  polyline(xs: number[], ys: number[], stroke: string, opts: { dash?: string; width?: number } = {}): void {
    const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.add(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${opts.width ?? 1.5}"${dash}/>`);
  }

  circle(x: number, y: number, r: number, fill: string, opacity = 1): void {
    this.add(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}" fill-opacity="${opacity}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string,
       opts: { dash?: string; width?: number } = {}): void {
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.add(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
             `stroke="${stroke}" stroke-width="${opts.width ?? 1}"${dash}/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
             `fill="${fill}" fill-opacity="${opacity}"/>`);
  }

  text(x: number, y: number, content: string,
       opts: { anchor?: string; size?: number; fill?: string; rotate?: number } = {}): void {
    const transform = opts.rotate ? ` transform="rotate(${opts.rotate} ${fmt(x)} ${fmt(y)})"` : "";
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="${opts.size ?? 11}" ` +
             `font-family="Helvetica,Arial,sans-serif" fill="${opts.fill ?? "#222"}" ` +
             `text-anchor="${opts.anchor ?? "start"}"${transform}>${escapeXml(content)}</text>`);
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

export function tickLabel(value: number): string {
  if (value !== 0 && (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-3)) {
    const exp = Math.round(Math.log10(Math.abs(value)));
    const mantissa = value / 10 ** exp;
    return Math.abs(mantissa - 1) < 1e-9 ? `1e${exp}` : `${Number(mantissa.toFixed(2))}e${exp}`;
  }
  return Number(value.toPrecision(4)).toString();
}
