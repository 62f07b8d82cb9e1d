// Draft editing operations for the three linked polyline editors, plus the
// mapping from server validation issues to inline UI markers. All edits are
// pure: they return a new draft for the session to POST.

import type { Issue, ModelFile, Report, Sign } from "./types.js";

function cloneModel(draft: ModelFile): ModelFile {
  return {
    trajectory: draft.trajectory.map((v) => [...v]),
    directions: draft.directions.map((d) =>
      Array.isArray(d) ? [...d] : { angle: d.angle },
    ),
    apexes: draft.apexes.map((a) => ({ ...a })),
    options: draft.options ? { ...draft.options } : undefined,
  };
}

/** Drag a trajectory vertex in the top view (x, y); z is kept. */
export function moveVertex(
  draft: ModelFile,
  index: number,
  x: number,
  y: number,
): ModelFile {
  const out = cloneModel(draft);
  const v = out.trajectory[index];
  if (!v) return draft;
  const dir = out.directions[index];
  if (Array.isArray(dir)) {
    // point-form directions ride along with their vertex
    dir[0] = dir[0]! + x - v[0]!;
    dir[1] = dir[1]! + y - v[1]!;
  }
  v[0] = x;
  v[1] = y;
  return out;
}

export function setVertexZ(
  draft: ModelFile,
  index: number,
  z: number,
): ModelFile {
  const out = cloneModel(draft);
  const v = out.trajectory[index];
  if (!v) return draft;
  const dir = out.directions[index];
  if (Array.isArray(dir)) dir[2] = dir[2]! + z - v[2]!;
  v[2] = z;
  return out;
}

/** Direction dial: keeps the direction horizontal by construction. */
export function setDirectionAngle(
  draft: ModelFile,
  index: number,
  degrees: number,
): ModelFile {
  const out = cloneModel(draft);
  if (index < 0 || index >= out.directions.length) return draft;
  out.directions[index] = { angle: degrees };
  return out;
}

export function directionAngleOf(draft: ModelFile, index: number): number {
  const dir = draft.directions[index];
  if (!dir) return 0;
  if (!Array.isArray(dir)) return dir.angle;
  const v = draft.trajectory[index];
  if (!v) return 0;
  return (Math.atan2(dir[1]! - v[1]!, dir[0]! - v[0]!) * 180) / Math.PI;
}

export function setApexZ(draft: ModelFile, index: number, z: number): ModelFile {
  const out = cloneModel(draft);
  const apex = out.apexes[index];
  if (!apex) return draft;
  apex.z = z;
  return out;
}

/** Sign toggle on the apex ladder; end apexes have no sign to toggle. */
export function toggleApexSign(draft: ModelFile, index: number): ModelFile {
  if (index <= 0 || index >= draft.apexes.length - 1) return draft;
  const out = cloneModel(draft);
  const apex = out.apexes[index]!;
  const next: Sign = apex.sign === "-" ? "+" : "-";
  apex.sign = next;
  return out;
}

export type MarkerTarget = "trajectory" | "direction" | "apex" | "model";

export interface Marker {
  target: MarkerTarget;
  index: number | null;
  code: string;
  message: string;
  severity: "violation" | "warning";
}

const TARGET_BY_CODE: Record<string, MarkerTarget> = {
  ConsecutiveApexesEqual: "apex",
  ScissorRequiresAllPlus: "apex",
  SignOnBoundaryApex: "apex",
  MissingInteriorSign: "apex",
  DegenerateHomology: "apex",
  TranslationalStrip: "direction",
  ConsecutivePlanesIdentical: "direction",
  DirectionNotHorizontal: "direction",
  DirectionCoincidesVertex: "direction",
  TranslationUndefined: "trajectory",
  DegenerateFrame: "trajectory",
  FrameNotNormalized: "trajectory",
  NonPlanarInterior: "apex",
  NonPlanarBoundaryStrip: "apex",
  TrajectoryInBasePlane: "trajectory",
};

/** Render the server's report verbatim as per-widget markers. */
export function markersFromReport(report: Report): Marker[] {
  const toMarker = (issue: Issue, severity: Marker["severity"]): Marker => ({
    target: TARGET_BY_CODE[issue.code] ?? "model",
    index: issue.index,
    code: issue.code,
    message: issue.message,
    severity,
  });
  return [
    ...report.violations.map((v) => toMarker(v, "violation")),
    ...report.warnings.map((w) => toMarker(w, "warning")),
  ];
}
