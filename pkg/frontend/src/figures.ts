/**
 * The seven figure builders.
 *
 * Every builder consumes its input datasets row by row (collecting the rows
 * it plots for the checksum contract), validates manifest experiment ids,
 * and recomputes analytic overlays from manifest parameters, checking them
 * against the manifest's analytics block at 1e-9 before drawing.
 */

import * as path from "node:path";
import * as analytic from "./analytic";
import { checksumRows } from "./checksum";
import type { Cell, Dataset } from "./csv";
import { columnIndex, loadCsv } from "./csv";
import * as svg from "./svg";

export interface FigureSpec {
  figure: string;
  inputs: Record<string, string>;
  output: string;
  title?: string;
}

export interface RenderResult {
  figure: string;
  svg: string;
  checksums: Record<string, string>;
}

interface BuildOutput {
  width: number;
  height: number;
  body: string;
  plotted: Record<string, Cell[][]>;
}

type Builder = (data: Record<string, Dataset>, title: string) => BuildOutput;

interface FigureDef {
  slots: Record<string, string>;
  defaultTitle: string;
  build: Builder;
}

const WIDTH = 640;
const HEIGHT = 430;
const FRAME: svg.Frame = { x0: 64, y0: 46, width: 544, height: 330 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function asNumber(cell: Cell, what: string): number {
  if (typeof cell !== "number") throw new Error(`${what} is not numeric: ${cell}`);
  return cell;
}

function titleAndLegend(title: string, entries: Array<[string, string]>): string {
  const parts = [svg.text(WIDTH / 2, 22, title, 14, "middle")];
  entries.forEach(([label, color], k) => {
    const y = FRAME.y0 + 14 + 16 * k;
    const x = FRAME.x0 + FRAME.width - 150;
    parts.push(svg.line(x, y - 4, x + 22, y - 4, color));
    parts.push(svg.text(x + 28, y, label, 11));
  });
  return parts.join("\n");
}

function traceBuilder(yLabel: string, color: string): Builder {
  return (data, title) => {
    const ds = data.trace;
    const tIdx = columnIndex(ds, "t");
    const sIdx = columnIndex(ds, "strength");
    const used: Cell[][] = [];
    const points: Array<[number, number]> = [];
    for (const row of ds.rows) {
      used.push(row);
      points.push([asNumber(row[tIdx], "t"), asNumber(row[sIdx], "strength")]);
    }
    const [xLo, xHi] = svg.extent(points.map((p) => p[0]), 0);
    const [, yHi] = svg.extent(points.map((p) => p[1]));
    const xs = new svg.LinearScale(xLo, xHi, FRAME.x0, FRAME.x0 + FRAME.width);
    const ys = new svg.LinearScale(0, yHi, FRAME.y0 + FRAME.height, FRAME.y0);
    const body = [
      svg.axes(FRAME, xs, ys, "time step", yLabel),
      svg.polyline(points.map(([x, y]) => [xs.apply(x), ys.apply(y)]), color, 1.2),
      titleAndLegend(title, []),
    ].join("\n");
    return { width: WIDTH, height: HEIGHT, body, plotted: { trace: used } };
  };
}

interface SweepGroup {
  alpha: number;
  points: Array<[number, number]>;
}

function collectSweep(
  ds: Dataset,
  xColumn: string,
  used: Cell[][],
): SweepGroup[] {
  const aIdx = columnIndex(ds, "alpha");
  const xIdx = columnIndex(ds, xColumn);
  const yIdx = columnIndex(ds, "mean_fraction");
  const groups = new Map<number, SweepGroup>();
  for (const row of ds.rows) {
    used.push(row);
    const alpha = asNumber(row[aIdx], "alpha");
    let group = groups.get(alpha);
    if (!group) {
      group = { alpha, points: [] };
      groups.set(alpha, group);
    }
    group.points.push([
      asNumber(row[xIdx], xColumn),
      asNumber(row[yIdx], "mean_fraction"),
    ]);
  }
  return [...groups.values()];
}

function analyticsForAlpha(block: Record<string, any>, alpha: number, label: string): any {
  for (const [key, value] of Object.entries(block)) {
    if (Number(key) === alpha) return value;
  }
  throw new Error(`${label}: analytics block has no entry for alpha=${alpha}`);
}

function buildFig2(data: Record<string, Dataset>, title: string): BuildOutput {
  const ds = data.sweep;
  const used: Cell[][] = [];
  const groups = collectSweep(ds, "g", used);
  const params = ds.manifest.params;
  const critical: Array<[number, number]> = groups.map((group, k) => {
    const fromManifest = analyticsForAlpha(ds.manifest.analytics.g_crit, group.alpha, ds.source);
    const recomputed = analytic.additiveCriticalThreshold(
      params.n, params.p, group.alpha, params.steps,
    );
    analytic.assertClose(`g_crit at alpha=${group.alpha}`, recomputed, fromManifest);
    return [fromManifest, k];
  });
  const xsAll = groups.flatMap((g) => g.points.map((p) => p[0])).concat(critical.map((c) => c[0]));
  const ysAll = groups.flatMap((g) => g.points.map((p) => p[1]));
  const [xLo, xHi] = svg.extent(xsAll);
  const xs = new svg.LinearScale(xLo, xHi, FRAME.x0, FRAME.x0 + FRAME.width);
  const ys = new svg.LinearScale(0, Math.max(...ysAll) * 1.1 + 1e-9, FRAME.y0 + FRAME.height, FRAME.y0);
  const parts = [svg.axes(FRAME, xs, ys, "activity threshold g", "largest component fraction")];
  const legend: Array<[string, string]> = [];
  groups.forEach((group, k) => {
    const color = PALETTE[k % PALETTE.length];
    parts.push(svg.polyline(group.points.map(([x, y]) => [xs.apply(x), ys.apply(y)]), color));
    legend.push([`decay ${group.alpha}`, color]);
  });
  for (const [g, k] of critical) {
    parts.push(
      svg.line(xs.apply(g), FRAME.y0, xs.apply(g), FRAME.y0 + FRAME.height, PALETTE[k % PALETTE.length], "5 4"),
    );
  }
  parts.push(titleAndLegend(title, legend));
  return { width: WIDTH, height: HEIGHT, body: parts.join("\n"), plotted: { sweep: used } };
}

function buildFig4(data: Record<string, Dataset>, title: string): BuildOutput {
  const ds = data.census;
  const params = ds.manifest.params;
  const probActive = analytic.resetProbActive(params.p, params.alpha, params.g);
  analytic.assertClose("prob_active", probActive, ds.manifest.analytics.prob_active);

  const sizeIdx = columnIndex(ds, "size");
  const used: Cell[][] = [];
  const sizes: number[] = [];
  for (const row of ds.rows) {
    used.push(row);
    sizes.push(asNumber(row[sizeIdx], "size"));
  }
  analytic.assertClose(
    "largest_fraction",
    sizes[0] / params.n,
    ds.manifest.analytics.largest_fraction,
  );

  // shelf layout: circles sized by sqrt(component size), wrapped into rows
  const largest = sizes[0];
  const radius = (size: number) => 3 + 34 * Math.sqrt(size / largest);
  const left = 40;
  const right = WIDTH - 40;
  const placed: Array<[number, number, number]> = [];
  let cx = left + radius(sizes[0]);
  let cy = 46 + radius(sizes[0]);
  let shelf = cy;
  for (const size of sizes) {
    const r = radius(size);
    if (cx + r > right) {
      cx = left + r;
      cy = shelf + r + 8;
    }
    placed.push([cx, cy, r]);
    shelf = Math.max(shelf, cy + r);
    cx += r * 2 + 6;
  }
  const height = Math.ceil(shelf) + 50;
  const parts: string[] = [];
  placed.forEach(([x, y, r], k) => {
    parts.push(svg.circle(x, y, r, k === 0 ? PALETTE[1] : PALETTE[0], "#333"));
    if (k < 3 && sizes[k] > 1) {
      parts.push(svg.text(x, y + 4, String(sizes[k]), 11, "middle"));
    }
  });
  const caption =
    `n=${params.n}, P(active)=${probActive.toFixed(6)}: ` +
    (ds.manifest.analytics.gcc_predicted ? "giant component expected" : "no giant component expected");
  parts.push(svg.text(WIDTH / 2, height - 14, caption, 11, "middle"));
  parts.push(svg.text(WIDTH / 2, 22, title, 14, "middle"));
  return { width: WIDTH, height, body: parts.join("\n"), plotted: { census: used } };
}

function buildFig5(data: Record<string, Dataset>, title: string): BuildOutput {
  const ds = data.sweep;
  const used: Cell[][] = [];
  const groups = collectSweep(ds, "p", used);
  const params = ds.manifest.params;
  const critical: Array<[number, number]> = groups.map((group, k) => {
    const entry = analyticsForAlpha(ds.manifest.analytics.p_crit, group.alpha, ds.source);
    const exact = analytic.resetCriticalP(params.n, group.alpha, params.g);
    analytic.assertClose(`p_crit at alpha=${group.alpha}`, exact, entry.exact);
    return [entry.exact, k];
  });
  const xsAll = groups.flatMap((g) => g.points.map((p) => p[0])).concat(critical.map((c) => c[0]));
  const ysAll = groups.flatMap((g) => g.points.map((p) => p[1]));
  const xs = new svg.Log10Scale(
    Math.min(...xsAll) / 1.3,
    Math.max(...xsAll) * 1.3,
    FRAME.x0,
    FRAME.x0 + FRAME.width,
  );
  const ys = new svg.LinearScale(0, Math.max(...ysAll) * 1.1 + 1e-9, FRAME.y0 + FRAME.height, FRAME.y0);
  const parts = [svg.axes(FRAME, xs, ys, "interaction probability p", "largest component fraction")];
  const legend: Array<[string, string]> = [];
  groups.forEach((group, k) => {
    const color = PALETTE[k % PALETTE.length];
    parts.push(svg.polyline(group.points.map(([x, y]) => [xs.apply(x), ys.apply(y)]), color));
    legend.push([`decay ${group.alpha}`, color]);
  });
  for (const [p, k] of critical) {
    parts.push(
      svg.line(xs.apply(p), FRAME.y0, xs.apply(p), FRAME.y0 + FRAME.height, PALETTE[k % PALETTE.length], "5 4"),
    );
  }
  parts.push(titleAndLegend(title, legend));
  return { width: WIDTH, height: HEIGHT, body: parts.join("\n"), plotted: { sweep: used } };
}

function buildFig6(data: Record<string, Dataset>, title: string): BuildOutput {
  const hist = data.histogram;
  const field = data.field;
  for (const key of ["dx", "delta", "w"]) {
    if (Math.abs(hist.manifest.params[key] - field.manifest.params[key]) > 1e-12) {
      throw new Error(
        `fig6 inputs disagree on ${key}: ${hist.manifest.params[key]} vs ${field.manifest.params[key]}`,
      );
    }
  }
  const dx = hist.manifest.params.dx as number;
  const delta = hist.manifest.params.delta as number;
  const w = hist.manifest.params.w as number;
  const beta = delta / dx;
  analytic.assertClose("4*beta", 4 * beta, field.manifest.analytics.boundary_value_continuum);
  analytic.assertClose(
    "discrete boundary value",
    analytic.discreteBoundaryValue(delta, dx),
    hist.manifest.analytics.boundary_density_discrete,
  );
  analytic.assertClose(
    "adjacent ratio",
    analytic.adjacentRatio(delta),
    hist.manifest.analytics.adjacent_ratio,
  );

  const hx = columnIndex(hist, "x");
  const hd = columnIndex(hist, "density");
  const usedHist: Cell[][] = [];
  const bars: Array<[number, number]> = [];
  for (const row of hist.rows) {
    usedHist.push(row);
    bars.push([asNumber(row[hx], "x"), asNumber(row[hd], "density")]);
  }
  const fx = columnIndex(field, "x");
  const fu = columnIndex(field, "u");
  const usedField: Cell[][] = [];
  const curve: Array<[number, number]> = [];
  for (const row of field.rows) {
    usedField.push(row);
    curve.push([asNumber(row[fx], "x"), asNumber(row[fu], "u")]);
  }

  const xLo = Math.min(bars[0][0], curve[0][0]) - dx;
  const xHi = w + dx;
  const yHi = Math.max(...bars.map((b) => b[1]), ...curve.map((c) => c[1]), 4 * beta) * 1.08;
  const xs = new svg.LinearScale(xLo, xHi, FRAME.x0, FRAME.x0 + FRAME.width);
  const ys = new svg.LinearScale(0, yHi, FRAME.y0 + FRAME.height, FRAME.y0);
  const parts = [svg.axes(FRAME, xs, ys, "log tie strength x", "density")];
  const y0 = ys.apply(0);
  for (const [x, density] of bars) {
    const left = xs.apply(x - dx / 2);
    const right = xs.apply(x + dx / 2);
    const top = ys.apply(density);
    parts.push(svg.rect(left, top, right - left, y0 - top, "#bbbbbb"));
  }
  parts.push(svg.polyline(curve.map(([x, u]) => [xs.apply(x), ys.apply(u)]), "#d62728", 1.8));
  const overlay = curve
    .filter(([x]) => x >= xLo)
    .map(([x]) => [xs.apply(x), ys.apply(analytic.boundedStationaryDensity(x, beta, w))] as [number, number]);
  parts.push(svg.polyline(overlay, "#333333", 1.2, "6 4"));
  parts.push(
    titleAndLegend(title, [
      ["Monte Carlo histogram", "#bbbbbb"],
      ["marched field", "#d62728"],
      ["analytic profile", "#333333"],
    ]),
  );
  return {
    width: WIDTH,
    height: HEIGHT,
    body: parts.join("\n"),
    plotted: { histogram: usedHist, field: usedField },
  };
}

function buildFig7(data: Record<string, Dataset>, title: string): BuildOutput {
  const ds = data.compare;
  const params = ds.manifest.params;
  const seriesIdx = columnIndex(ds, "series");
  const lambdaIdx = columnIndex(ds, "lambda");
  const stepIdx = columnIndex(ds, "step");
  const sIdx = columnIndex(ds, "s");
  const iIdx = columnIndex(ds, "i");
  const rIdx = columnIndex(ds, "r");

  interface Panel {
    label: string;
    s: Array<[number, number]>;
    i: Array<[number, number]>;
    r: Array<[number, number]>;
    overlay: boolean;
  }

  const used: Cell[][] = [];
  const panels = new Map<string, Panel>();
  const discrete: { s: number[]; i: number[]; r: number[] } = { s: [], i: [], r: [] };
  for (const row of ds.rows) {
    used.push(row);
    const series = String(row[seriesIdx]);
    const lambda = asNumber(row[lambdaIdx], "lambda");
    const key = series === "discrete" ? "discrete" : `lambda=${lambda}`;
    let panel = panels.get(key);
    if (!panel) {
      panel = {
        label: series === "discrete" ? "well-mixed recursion" : `tie-decay, lambda=${lambda}`,
        s: [], i: [], r: [],
        overlay: series !== "discrete",
      };
      panels.set(key, panel);
    }
    const step = asNumber(row[stepIdx], "step");
    panel.s.push([step, asNumber(row[sIdx], "s")]);
    panel.i.push([step, asNumber(row[iIdx], "i")]);
    panel.r.push([step, asNumber(row[rIdx], "r")]);
    if (series === "discrete") {
      discrete.s.push(asNumber(row[sIdx], "s"));
      discrete.i.push(asNumber(row[iIdx], "i"));
      discrete.r.push(asNumber(row[rIdx], "r"));
    }
  }

  const steps = discrete.s.length - 1;
  const recomputed = analytic.discreteSir(
    params.beta_bar, params.gamma_bar, params.n_pop,
    params.n_pop - params.i0, params.i0, 0, steps,
  );
  for (let t = 0; t <= steps; t += 1) {
    analytic.assertClose(`discrete S at step ${t}`, recomputed.s[t], discrete.s[t]);
    analytic.assertClose(`discrete I at step ${t}`, recomputed.i[t], discrete.i[t]);
    analytic.assertClose(`discrete R at step ${t}`, recomputed.r[t], discrete.r[t]);
  }

  const cols = 2;
  const names = [...panels.keys()];
  const rowsOfPanels = Math.ceil(names.length / cols);
  const panelW = 300;
  const panelH = 220;
  const width = 40 + cols * (panelW + 30);
  const height = 50 + rowsOfPanels * (panelH + 46);
  const parts: string[] = [svg.text(width / 2, 22, title, 14, "middle")];
  names.forEach((name, k) => {
    const panel = panels.get(name)!;
    const frame: svg.Frame = {
      x0: 52 + (k % cols) * (panelW + 30),
      y0: 44 + Math.floor(k / cols) * (panelH + 46),
      width: panelW,
      height: panelH,
    };
    const xs = new svg.LinearScale(0, steps, frame.x0, frame.x0 + frame.width);
    const ys = new svg.LinearScale(0, params.n_pop * 1.05, frame.y0 + frame.height, frame.y0);
    parts.push(svg.axes(frame, xs, ys, "time step", "individuals"));
    if (panel.overlay) {
      const overlayPoints = recomputed.i.map(
        (v, t) => [xs.apply(t), ys.apply(v)] as [number, number],
      );
      parts.push(svg.polyline(overlayPoints, "#999999", 1, "3 3"));
    }
    parts.push(svg.polyline(panel.s.map(([t, v]) => [xs.apply(t), ys.apply(v)]), "#1f77b4", 1.4, "8 3 2 3"));
    parts.push(svg.polyline(panel.i.map(([t, v]) => [xs.apply(t), ys.apply(v)]), "#d62728", 1.4, "6 3"));
    parts.push(svg.polyline(panel.r.map(([t, v]) => [xs.apply(t), ys.apply(v)]), "#bc9b22", 1.6));
    parts.push(svg.text(frame.x0 + frame.width / 2, frame.y0 - 8, panel.label, 12, "middle"));
  });
  return { width, height, body: parts.join("\n"), plotted: { compare: used } };
}

export const FIGURES: Record<string, FigureDef> = {
  fig1: {
    slots: { trace: "ahmad-trace" },
    defaultTitle: "Additive model: tie strength of one edge",
    build: traceBuilder("tie strength", "#1f77b4"),
  },
  fig2: {
    slots: { sweep: "ahmad-gcc" },
    defaultTitle: "Additive model: largest component vs threshold",
    build: buildFig2,
  },
  fig3: {
    slots: { trace: "b2u-trace" },
    defaultTitle: "Reset model: tie strength of one edge",
    build: traceBuilder("tie strength", "#2ca02c"),
  },
  fig4: {
    slots: { census: "b2u-components" },
    defaultTitle: "Reset model: component gallery",
    build: buildFig4,
  },
  fig5: {
    slots: { sweep: "b2u-gcc-sweep" },
    defaultTitle: "Reset model: largest component vs interaction probability",
    build: buildFig5,
  },
  fig6: {
    slots: { histogram: "walk-stationary", field: "fd-stationary" },
    defaultTitle: "Bounded drift-diffusion: histogram, field, analytic profile",
    build: buildFig6,
  },
  fig7: {
    slots: { compare: "sir-compare" },
    defaultTitle: "SIR: tie-decay contacts vs the discrete recursion",
    build: buildFig7,
  },
};

export function renderFigure(
  spec: FigureSpec,
  baseDir = ".",
  loader: (p: string) => Dataset = loadCsv,
): RenderResult {
  const def = FIGURES[spec.figure];
  if (!def) {
    throw new Error(`unknown figure '${spec.figure}' (have ${Object.keys(FIGURES).join(", ")})`);
  }
  const extra = Object.keys(spec.inputs).filter((slot) => !(slot in def.slots));
  if (extra.length > 0) {
    throw new Error(`figure ${spec.figure} does not take inputs: ${extra.join(", ")}`);
  }
  const data: Record<string, Dataset> = {};
  for (const [slot, expected] of Object.entries(def.slots)) {
    const rel = spec.inputs[slot];
    if (!rel) throw new Error(`figure ${spec.figure} requires input '${slot}'`);
    const ds = loader(path.resolve(baseDir, rel));
    if (ds.manifest.experiment !== expected) {
      throw new Error(
        `figure ${spec.figure} input '${slot}' expects experiment '${expected}', ` +
        `found '${ds.manifest.experiment}'`,
      );
    }
    data[slot] = ds;
  }
  const title = spec.title ?? def.defaultTitle;
  const out = def.build(data, title);
  const checksums: Record<string, string> = {};
  for (const [slot, rows] of Object.entries(out.plotted)) {
    checksums[slot] = checksumRows(rows);
  }
  const description =
    `figure ${spec.figure}; plotted-data sha256: ` +
    Object.entries(checksums).map(([slot, sum]) => `${slot}=${sum}`).join(" ");
  return {
    figure: spec.figure,
    svg: svg.svgDocument(out.width, out.height, out.body, description),
    checksums,
  };
}
