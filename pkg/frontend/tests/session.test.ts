import { describe, expect, it } from "vitest";

import {
  applySwitch,
  clampT,
  initialSession,
  limitEpsilon,
  limitMarkers,
  modelLoaded,
  modelRejected,
  setT,
  switchableLimitAt,
  toggleFlips,
} from "../src/session.js";
import type { IntervalInfo, ModelCreated, Report } from "../src/types.js";

const interval: IntervalInfo = {
  t_star: -1.0,
  t_lambda: -1.728157516348372,
  t_mu: 0.2628153743776931,
  hard: [-2.23606797749979, 2.23606797749979],
  zero_length: false,
  limits: [
    { t: -2.23606797749979, owners: [], kind: "domain" },
    { t: -1.728157516348372, owners: [1], kind: "discriminant" },
    { t: 0.2628153743776931, owners: [1], kind: "discriminant" },
    { t: 2.23606797749979, owners: [], kind: "domain" },
  ],
};

const created: ModelCreated = {
  id: "abc123",
  report: { ok: true, violations: [], warnings: [] },
  classification: "axial",
  t_star: -1.0,
  interval,
  strips: 1,
};

const draft = {
  trajectory: [[2, 0, 0]],
  directions: [{ angle: 0 }],
  apexes: [{ z: -1 }, { z: 2, sign: "+" as const }, { z: 4 }],
};

describe("t clamping", () => {
  it("keeps t inside the reported interval", () => {
    expect(clampT(interval, -5)).toBe(interval.t_lambda);
    expect(clampT(interval, 5)).toBe(interval.t_mu);
    expect(clampT(interval, 0)).toBe(0);
  });

  it("setT clamps against the session interval", () => {
    let state = modelLoaded(initialSession(draft), created);
    state = setT(state, 99);
    expect(state.t).toBe(interval.t_mu);
  });
});

describe("branch switch enablement", () => {
  it("is enabled exactly within epsilon of a discriminant limit", () => {
    const eps = limitEpsilon(interval);
    const atLimit = switchableLimitAt(interval, interval.t_lambda + eps / 2);
    expect(atLimit?.owners).toEqual([1]);
    const nearButOutside = switchableLimitAt(
      interval,
      interval.t_lambda + eps * 2.5,
    );
    expect(nearButOutside).toBeNull();
    expect(switchableLimitAt(interval, -0.7)).toBeNull();
    expect(
      switchableLimitAt(interval, interval.t_mu - eps / 2)?.owners,
    ).toEqual([1]);
  });

  it("never triggers on domain endpoints", () => {
    const hardOnly: IntervalInfo = {
      ...interval,
      t_lambda: interval.hard[0]!,
      t_mu: interval.hard[1]!,
      limits: interval.limits.filter((l) => l.kind === "domain"),
    };
    expect(switchableLimitAt(hardOnly, hardOnly.t_lambda)).toBeNull();
    expect(switchableLimitAt(hardOnly, hardOnly.t_mu)).toBeNull();
  });

  it("sweeping the slider enables the control only at the markers", () => {
    const eps = limitEpsilon(interval);
    for (let k = 0; k <= 200; k++) {
      const t = interval.t_lambda +
        (k / 200) * (interval.t_mu - interval.t_lambda);
      const enabled = switchableLimitAt(interval, t) !== null;
      const nearMarker = interval.limits.some(
        (l) => l.kind === "discriminant" && Math.abs(l.t - t) <= eps,
      );
      expect(enabled).toBe(nearMarker);
    }
  });
});

describe("flip list bookkeeping", () => {
  it("toggling is an involution per strip", () => {
    expect(toggleFlips([], [1])).toEqual([1]);
    expect(toggleFlips([1], [1])).toEqual([]);
    expect(toggleFlips([2], [1, 3])).toEqual([1, 2, 3]);
  });

  it("applySwitch only accepts discriminant limits with owners", () => {
    let state = modelLoaded(initialSession(draft), created);
    state = applySwitch(state, interval.limits[1]!);
    expect(state.flips).toEqual([1]);
    state = applySwitch(state, interval.limits[0]!); // domain endpoint
    expect(state.flips).toEqual([1]);
    state = applySwitch(state, null);
    expect(state.flips).toEqual([1]);
  });
});

describe("server authority", () => {
  it("a rejected draft clears the model id so nothing stale renders", () => {
    const report: Report = {
      ok: false,
      violations: [
        { code: "ScissorRequiresAllPlus", message: "equal bars", index: 0 },
      ],
      warnings: [],
    };
    let state = modelLoaded(initialSession(draft), created);
    state = modelRejected(state, report);
    expect(state.modelId).toBeNull();
    expect(state.interval).toBeNull();
    expect(state.report?.violations[0]?.code).toBe("ScissorRequiresAllPlus");
  });
});

describe("limit markers", () => {
  it("maps interval-bounding limits onto the slider track", () => {
    const markers = limitMarkers(interval);
    expect(markers).toHaveLength(2);
    expect(markers[0]?.fraction).toBeCloseTo(0, 9);
    expect(markers[1]?.fraction).toBeCloseTo(1, 9);
  });
});
