// Session state and its pure update rules. The UI holds no geometry
// solver: everything rendered comes from server payloads, and these
// reducers only clamp, select and bookkeep.

import type {
  Diagnostics,
  IntervalInfo,
  LimitInfo,
  ModelCreated,
  ModelFile,
  Report,
} from "./types.js";

export interface ViewSettings {
  yaw: number;
  pitch: number;
  zoom: number;
}

export interface SessionState {
  draft: ModelFile;
  modelId: string | null;
  classification: string | null;
  interval: IntervalInfo | null;
  t: number;
  flips: number[];
  report: Report | null; // server report, echoed verbatim
  diagnostics: Diagnostics | null;
  view: ViewSettings;
}

/** Slider fraction of the interval treated as "at" a limit marker. */
export const LIMIT_EPSILON_FRACTION = 0.01;

export function initialSession(draft: ModelFile): SessionState {
  return {
    draft,
    modelId: null,
    classification: null,
    interval: null,
    t: 0,
    flips: [],
    report: null,
    diagnostics: null,
    view: { yaw: 0.6, pitch: 0.35, zoom: 1 },
  };
}

export function clampT(interval: IntervalInfo, t: number): number {
  return Math.min(interval.t_mu, Math.max(interval.t_lambda, t));
}

export function modelLoaded(
  state: SessionState,
  created: ModelCreated,
): SessionState {
  return {
    ...state,
    modelId: created.id,
    classification: created.classification,
    interval: created.interval,
    t: created.t_star,
    flips: [],
    report: created.report,
    diagnostics: null,
  };
}

export function modelRejected(
  state: SessionState,
  report: Report,
): SessionState {
  // a rejected draft never reaches the 3D view
  return {
    ...state,
    modelId: null,
    classification: null,
    interval: null,
    report,
    diagnostics: null,
  };
}

export function setT(state: SessionState, t: number): SessionState {
  if (!state.interval) return state;
  return { ...state, t: clampT(state.interval, t) };
}

export function limitEpsilon(interval: IntervalInfo): number {
  return LIMIT_EPSILON_FRACTION * (interval.t_mu - interval.t_lambda);
}

/**
 * The limit the slider currently sits on, if any. Branch switching is
 * enabled exactly when this returns a discriminant limit.
 */
export function switchableLimitAt(
  interval: IntervalInfo,
  t: number,
  epsilon?: number,
): LimitInfo | null {
  const eps = epsilon ?? limitEpsilon(interval);
  for (const lim of interval.limits) {
    if (lim.kind !== "discriminant") continue;
    if (lim.t < interval.t_lambda - eps || lim.t > interval.t_mu + eps) {
      continue; // outer roots are not reachable on this branch
    }
    if (Math.abs(lim.t - t) <= eps) return lim;
  }
  return null;
}

export function toggleFlips(flips: number[], owners: number[]): number[] {
  const out = new Set(flips);
  for (const strip of owners) {
    if (out.has(strip)) out.delete(strip);
    else out.add(strip);
  }
  return [...out].sort((a, b) => a - b);
}

/**
 * Apply a branch switch at the given limit. Only limit-owning strips may
 * enter the flip list; calls with anything else are ignored.
 */
export function applySwitch(
  state: SessionState,
  limit: LimitInfo | null,
): SessionState {
  if (!state.interval || !limit || limit.kind !== "discriminant") return state;
  if (!limit.owners.length) return state;
  return { ...state, flips: toggleFlips(state.flips, limit.owners) };
}

export function intervalRefreshed(
  state: SessionState,
  interval: IntervalInfo,
): SessionState {
  return { ...state, interval, t: clampT(interval, state.t) };
}

export function diagnosticsReceived(
  state: SessionState,
  diagnostics: Diagnostics,
): SessionState {
  return { ...state, diagnostics };
}

/** Positions of the limit markers on a [0, 1] slider track. */
export function limitMarkers(
  interval: IntervalInfo,
): { fraction: number; limit: LimitInfo }[] {
  const span = interval.t_mu - interval.t_lambda;
  if (span <= 0) return [];
  return interval.limits
    .filter(
      (l) =>
        l.kind === "discriminant" &&
        l.t >= interval.t_lambda - 1e-12 &&
        l.t <= interval.t_mu + 1e-12,
    )
    .map((l) => ({
      fraction: Math.min(1, Math.max(0, (l.t - interval.t_lambda) / span)),
      limit: l,
    }));
}
