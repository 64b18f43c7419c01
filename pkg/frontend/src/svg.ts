/**
 * Minimal deterministic SVG plotting: linear/log scales, nice ticks, line
 * series, bars, circles and labeled axes. No DOM, no randomness; identical
 * inputs produce byte-identical documents.
 */

export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  return v.toFixed(2);
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 1e4 || magnitude < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

export interface Scale {
  apply(v: number): number;
  readonly min: number;
  readonly max: number;
  ticks(count: number): number[];
}

export class LinearScale implements Scale {
  constructor(
    readonly min: number,
    readonly max: number,
    private readonly r0: number,
    private readonly r1: number,
  ) {
    if (!(max > min)) throw new Error(`degenerate scale domain [${min}, ${max}]`);
  }

  apply(v: number): number {
    return this.r0 + ((v - this.min) / (this.max - this.min)) * (this.r1 - this.r0);
  }

  ticks(count: number): number[] {
    const span = this.max - this.min;
    const raw = span / Math.max(1, count);
    const power = Math.pow(10, Math.floor(Math.log10(raw)));
    const candidates = [1, 2, 5, 10].map((m) => m * power);
    const step = candidates.find((c) => span / c <= count) ?? candidates[3];
    const start = Math.ceil(this.min / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.max + 1e-12 * span; v += step) {
      out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
    }
    return out;
  }
}

export class Log10Scale implements Scale {
  constructor(
    readonly min: number,
    readonly max: number,
    private readonly r0: number,
    private readonly r1: number,
  ) {
    if (!(min > 0 && max > min)) throw new Error(`bad log domain [${min}, ${max}]`);
  }

  apply(v: number): number {
    if (!(v > 0)) throw new Error(`log scale got non-positive value ${v}`);
    const t = (Math.log10(v) - Math.log10(this.min)) / (Math.log10(this.max) - Math.log10(this.min));
    return this.r0 + t * (this.r1 - this.r0);
  }

  ticks(_count: number): number[] {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(this.min)); e <= Math.floor(Math.log10(this.max)); e += 1) {
      out.push(Math.pow(10, e));
    }
    return out.length >= 2 ? out : [this.min, this.max];
  }
}

export function extent(values: number[], padFraction = 0.05): [number, number] {
  if (values.length === 0) throw new Error("cannot scale an empty series");
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    const pad = Math.max(1e-9, Math.abs(lo) * 0.1, 0.5);
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

const ESCAPES: Record<string, string> = { "&": "&amp;", "<": "&lt;", ">": "&gt;" };

export function escapeText(text: string): string {
  return text.replace(/[&<>]/g, (c) => ESCAPES[c]);
}

export function polyline(
  points: Array<[number, number]>,
  stroke: string,
  width = 1.5,
  dash = "",
): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr} points="${path}"/>`;
}

export function rect(x: number, y: number, w: number, h: number, fill: string): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(Math.max(0, w))}" height="${fmt(Math.max(0, h))}" fill="${fill}"/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string, stroke = "none"): string {
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}" stroke="${stroke}"/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, dash = ""): string {
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="1"${dashAttr}/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  size = 11,
  anchor: "start" | "middle" | "end" = "start",
  rotate = 0,
): string {
  const transform = rotate ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica, Arial, sans-serif" ` +
    `font-size="${size}" text-anchor="${anchor}"${transform}>${escapeText(content)}</text>`
  );
}

export interface Frame {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

export function axes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  const bottom = frame.y0 + frame.height;
  const right = frame.x0 + frame.width;
  parts.push(line(frame.x0, bottom, right, bottom, "#333"));
  parts.push(line(frame.x0, frame.y0, frame.x0, bottom, "#333"));
  for (const v of xScale.ticks(6)) {
    const x = xScale.apply(v);
    parts.push(line(x, bottom, x, bottom + 4, "#333"));
    parts.push(text(x, bottom + 16, tickLabel(v), 10, "middle"));
  }
  for (const v of yScale.ticks(5)) {
    const y = yScale.apply(v);
    parts.push(line(frame.x0 - 4, y, frame.x0, y, "#333"));
    parts.push(text(frame.x0 - 7, y + 3, tickLabel(v), 10, "end"));
  }
  parts.push(text(frame.x0 + frame.width / 2, bottom + 32, xLabel, 12, "middle"));
  parts.push(text(frame.x0 - 42, frame.y0 + frame.height / 2, yLabel, 12, "middle", -90));
  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string, description: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<desc>${escapeText(description)}</desc>\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>\n` +
    `${body}\n</svg>\n`
  );
}
