// Payload types of the phedra service contract.

export type Sign = "+" | "-";

export interface ApexEntry {
  z: number;
  sign?: Sign;
}

export interface ModelFile {
  trajectory: number[][];
  directions: (number[] | { angle: number })[];
  apexes: ApexEntry[];
  options?: { normalize?: boolean; samples?: number };
}

export interface Issue {
  code: string;
  message: string;
  index: number | null;
}

export interface Report {
  ok: boolean;
  violations: Issue[];
  warnings: Issue[];
}

export interface LimitInfo {
  t: number;
  owners: number[];
  kind: "discriminant" | "domain";
}

export interface IntervalInfo {
  t_star: number;
  t_lambda: number;
  t_mu: number;
  hard: number[];
  zero_length: boolean;
  limits: LimitInfo[];
}

export interface Diagnostics {
  max_isometry_deviation: number;
  max_planarity_defect: number;
  tangent_strips: number[];
}

export interface LinkagePayload {
  apex_z: number[];
  columns: number[][][]; // per column, per row, [r, z]
}

export interface MeshPayload {
  t: number;
  vertices: number[][];
  grid_shape: number[]; // [columns, rows]
  faces: number[][];
  diagnostics: Diagnostics;
  linkage: LinkagePayload;
}

export interface ModelCreated {
  id: string;
  report: Report;
  classification: string;
  t_star: number;
  interval: IntervalInfo;
  strips: number;
}

export interface FramesPayload {
  branch: number[];
  frames: MeshPayload[];
}

export interface FlatcheckPayload {
  verdict: "flexes" | "blocked" | "rigid" | "indeterminate";
  coupling_rates?: number[][];
  apex_rates?: number[];
  velocities?: number[][][];
  chart?: number[][][];
  apex_z?: number[];
  normalization?: string;
  nullity?: number;
}

export interface TubePayload {
  closed: boolean;
  closure_error: number;
  class: string;
  symmetry_ok: boolean;
  sampled_max_error: number | null;
}

export interface ApiError {
  code: string;
  message: string;
  details?: unknown;
}
