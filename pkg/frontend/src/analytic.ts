/**
 * Closed forms recomputed for figure overlays.
 *
 * These deliberately duplicate the primary toolkit's formulas: overlays are
 * drawn from manifest parameters, never by re-simulating, and every figure
 * spot-checks its recomputed values against the manifest's analytics block
 * at 1e-9 relative tolerance.
 */

export function additiveCriticalThreshold(
  n: number,
  p: number,
  alpha: number,
  steps: number,
  s0 = 0,
): number {
  const exponent = (alpha / p) * (Math.exp(steps * p) * (1 - 1 / n) - 1);
  return Math.exp(exponent - steps * alpha) + s0 * Math.exp(-steps * alpha);
}

export function additiveMeanStationary(p: number, alpha: number): number {
  return p / ((1 - Math.exp(-alpha)) * (1 - p));
}

export function resetMeanStationary(p: number, alpha: number): number {
  return p / (1 - Math.exp(-alpha) * (1 - p));
}

export function resetProbActive(p: number, alpha: number, g: number): number {
  const q = Math.ceil(-Math.log(g) / alpha);
  return 1 - Math.pow(1 - p, q);
}

export function resetCriticalP(n: number, alpha: number, g: number): number {
  const q = Math.ceil(-Math.log(g) / alpha);
  return 1 - Math.pow(1 - 1 / n, 1 / q);
}

/** Stationary log-strength density of the bounded biased walk. */
export function boundedStationaryDensity(x: number, beta: number, w: number): number {
  return 4 * beta * Math.exp(4 * beta * (x - w));
}

/** Lattice boundary value of the discrete stationary profile. */
export function discreteBoundaryValue(delta: number, dx: number): number {
  return (2 * delta) / ((0.5 + delta) * dx);
}

export function adjacentRatio(delta: number): number {
  return (0.5 + delta) / (0.5 - delta);
}

export function gaussianDensity(x: number, t: number, diffusivity: number): number {
  return Math.exp(-(x * x) / (4 * diffusivity * t)) / Math.sqrt(4 * Math.PI * diffusivity * t);
}

export interface SirSeries {
  s: number[];
  i: number[];
  r: number[];
}

/** Deterministic discrete SIR recursion (the fig7 overlay). */
export function discreteSir(
  betaBar: number,
  gammaBar: number,
  nPop: number,
  s0: number,
  i0: number,
  r0: number,
  steps: number,
): SirSeries {
  const s = [s0];
  const i = [i0];
  const r = [r0];
  for (let t = 0; t < steps; t += 1) {
    const newInf = (betaBar * i[t] * s[t]) / nPop;
    const recovered = gammaBar * i[t];
    const total = s[t] + i[t] + r[t];
    const sNext = s[t] - newInf;
    const rNext = r[t] + recovered;
    s.push(sNext);
    r.push(rNext);
    i.push(total - sNext - rNext);
  }
  return { s, i, r };
}

/** Relative agreement guard used by the render-time spot checks. */
export function assertClose(label: string, actual: number, expected: number, tol = 1e-9): void {
  const scale = Math.max(1, Math.abs(expected));
  if (!(Math.abs(actual - expected) <= tol * scale)) {
    throw new Error(
      `analytic spot check failed for ${label}: recomputed ${actual} vs manifest ${expected}`,
    );
  }
}
