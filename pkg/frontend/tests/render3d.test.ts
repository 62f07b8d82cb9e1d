import { describe, expect, it } from "vitest";

import {
  drawMesh,
  meshBounds,
  projectPoint,
  type DrawSurface,
} from "../src/render3d.js";
import type { MeshPayload } from "../src/types.js";

function recordingSurface(width = 200, height = 100) {
  const polygons: [number, number][][] = [];
  const lines: [number, number][][] = [];
  const surface: DrawSurface = {
    width,
    height,
    clear: () => {
      polygons.length = 0;
      lines.length = 0;
    },
    polygon: (pts) => polygons.push(pts.map((p) => [...p] as [number, number])),
    line: (a, b) => lines.push([a, b]),
    text: () => {},
  };
  return { surface, polygons, lines };
}

const mesh: MeshPayload = {
  t: 0,
  vertices: [
    [0, 0, 0],
    [1, 0, 0],
    [1, 0, 1],
    [0, 0, 1],
    [2, 1, 0],
    [2, 1, 1],
  ],
  grid_shape: [3, 2],
  faces: [
    [0, 1, 2, 3],
    [1, 4, 5, 2],
  ],
  diagnostics: {
    max_isometry_deviation: 0,
    max_planarity_defect: 0,
    tangent_strips: [],
  },
  linkage: { apex_z: [], columns: [] },
};

describe("projection", () => {
  it("is an affine view map, no geometry synthesis", () => {
    const view = { yaw: 0.3, pitch: 0.2, zoom: 1.2 };
    const surface = { width: 200, height: 100 };
    const center = [0, 0, 0];
    const a = projectPoint(view, center, 10, surface, [1, 2, 3]);
    const b = projectPoint(view, center, 10, surface, [-1, -2, -3]);
    const mid = projectPoint(view, center, 10, surface, [0, 0, 0]);
    // affinity: midpoint of images equals image of midpoint
    expect((a[0] + b[0]) / 2).toBeCloseTo(mid[0], 10);
    expect((a[1] + b[1]) / 2).toBeCloseTo(mid[1], 10);
  });

  it("front view drops y and keeps x/z proportions", () => {
    const view = { yaw: 0, pitch: 0, zoom: 1 };
    const surface = { width: 200, height: 100 };
    const p = projectPoint(view, [0, 0, 0], 10, surface, [3, 99, 2]);
    expect(p[0]).toBeCloseTo(100 + 30, 10);
    expect(p[1]).toBeCloseTo(50 - 20, 10);
  });
});

describe("mesh painter", () => {
  it("draws every server face and nothing else", () => {
    const { surface, polygons } = recordingSurface();
    const stats = drawMesh(surface, mesh, { yaw: 0.5, pitch: 0.4, zoom: 1 });
    expect(stats.faces).toBe(2);
    expect(polygons).toHaveLength(2);
    expect(stats.projected).toBe(8); // four corners per quad, verbatim
    for (const poly of polygons) {
      for (const [x, y] of poly) {
        expect(Number.isFinite(x) && Number.isFinite(y)).toBe(true);
      }
    }
  });

  it("renders the same payload to the same pixels", () => {
    const a = recordingSurface();
    const b = recordingSurface();
    const view = { yaw: 0.7, pitch: 0.1, zoom: 1 };
    drawMesh(a.surface, mesh, view);
    drawMesh(b.surface, mesh, view);
    expect(a.polygons).toEqual(b.polygons);
  });

  it("bounds come from the payload alone", () => {
    const { center, radius } = meshBounds(mesh.vertices);
    expect(center).toEqual([1, 0.5, 0.5]);
    expect(radius).toBeCloseTo(Math.hypot(2, 1, 1) / 2, 12);
  });
});
