import { describe, expect, it } from "vitest";

import {
  additiveCriticalThreshold,
  additiveMeanStationary,
  adjacentRatio,
  boundedStationaryDensity,
  discreteBoundaryValue,
  discreteSir,
  gaussianDensity,
  resetCriticalP,
  resetProbActive,
} from "../src/analytic";

describe("overlay closed forms agree with the primary toolkit's values", () => {
  it("additive critical threshold", () => {
    expect(additiveCriticalThreshold(2000, 1e-5, 0.01, 1000)).toBeCloseTo(0.634538, 6);
    expect(additiveCriticalThreshold(2000, 1e-5, 0.1, 1000)).toBeCloseTo(0.010582, 6);
    expect(additiveCriticalThreshold(2000, 1e-5, 0.001, 1000)).toBeCloseTo(0.955533, 6);
  });

  it("additive stationary mean", () => {
    expect(additiveMeanStationary(0.1, 0.05)).toBeCloseTo(2.278241, 6);
  });

  it("reset activity probability and critical p", () => {
    expect(resetProbActive(1 / 1100, 0.01, 0.95)).toBeCloseTo(0.0054422, 7);
    expect(resetProbActive(1 / 1100, 0.01, 0.995)).toBeCloseTo(9.0909e-4, 8);
    expect(resetProbActive(0.3, 0.01, 1.0)).toBe(0);
    expect(resetCriticalP(1000, 0.01, 0.9)).toBeCloseTo(9.095044e-5, 10);
    expect(resetCriticalP(1000, 1.0, 0.9)).toBeCloseTo(1e-3, 12);
  });

  it("bounded-walk profile values", () => {
    expect(boundedStationaryDensity(2.0, 15, 2.0)).toBeCloseTo(60, 12);
    expect(boundedStationaryDensity(1.95, 15, 2.0)).toBeCloseTo(2.987224, 6);
    expect(discreteBoundaryValue(0.075, 0.005)).toBeCloseTo(52.173913, 5);
    expect(adjacentRatio(0.075)).toBeCloseTo(0.575 / 0.425, 12);
  });

  it("gaussian density peak", () => {
    expect(gaussianDensity(0, 0.03, 1.25)).toBeCloseTo(1.456731, 6);
    expect(gaussianDensity(0.7, 0.03, 1.25)).toBeCloseTo(gaussianDensity(-0.7, 0.03, 1.25), 12);
  });

  it("discrete SIR recursion conserves and peaks once", () => {
    const out = discreteSir(0.6, 0.1, 5000, 4990, 10, 0, 150);
    for (let t = 0; t <= 150; t += 1) {
      expect(out.s[t] + out.i[t] + out.r[t]).toBeCloseTo(5000, 8);
    }
    const peak = out.i.indexOf(Math.max(...out.i));
    expect(peak).toBeGreaterThan(0);
    expect(peak).toBeLessThan(150);
    expect(out.r[150]).toBeGreaterThan(4900);
  });
});
