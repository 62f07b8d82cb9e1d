// Minimal orthographic quad-mesh painter. It contains no geometry solving:
// vertices arrive from the server and are only passed through the view
// transform. The drawing surface is injected so tests can record calls.

import type { MeshPayload } from "./types.js";
import type { ViewSettings } from "./session.js";

export interface DrawSurface {
  width: number;
  height: number;
  clear(): void;
  polygon(points: [number, number][], fill: string, stroke: string): void;
  line(a: [number, number], b: [number, number], stroke: string): void;
  text(s: string, x: number, y: number, color: string): void;
}

export function projectPoint(
  view: ViewSettings,
  center: number[],
  scale: number,
  surface: { width: number; height: number },
  p: number[],
): [number, number] {
  const cy = Math.cos(view.yaw);
  const sy = Math.sin(view.yaw);
  const cp = Math.cos(view.pitch);
  const sp = Math.sin(view.pitch);
  const x = p[0]! - center[0]!;
  const y = p[1]! - center[1]!;
  const z = p[2]! - center[2]!;
  const rx = cy * x + sy * y;
  const ry = -sy * x + cy * y;
  const sx = rx;
  const sz = cp * z - sp * ry;
  return [
    surface.width / 2 + sx * scale * view.zoom,
    surface.height / 2 - sz * scale * view.zoom,
  ];
}

export function meshBounds(vertices: number[][]): { center: number[]; radius: number } {
  const lo = [Infinity, Infinity, Infinity];
  const hi = [-Infinity, -Infinity, -Infinity];
  for (const v of vertices) {
    for (let k = 0; k < 3; k++) {
      lo[k] = Math.min(lo[k]!, v[k]!);
      hi[k] = Math.max(hi[k]!, v[k]!);
    }
  }
  const center = [0, 1, 2].map((k) => (lo[k]! + hi[k]!) / 2);
  const radius =
    Math.hypot(hi[0]! - lo[0]!, hi[1]! - lo[1]!, hi[2]! - lo[2]!) / 2 || 1;
  return { center, radius };
}

function defectColor(defect: number): string {
  // green for planar panels, fading to red as the defect approaches 1e-6
  const bad = Math.min(1, defect / 1e-6);
  const r = Math.round(90 + 150 * bad);
  const g = Math.round(190 - 120 * bad);
  return `rgba(${r}, ${g}, 110, 0.75)`;
}

export interface DrawStats {
  faces: number;
  projected: number;
}

export function drawMesh(
  surface: DrawSurface,
  mesh: MeshPayload,
  view: ViewSettings,
): DrawStats {
  surface.clear();
  const { center, radius } = meshBounds(mesh.vertices);
  const scale = (0.42 * Math.min(surface.width, surface.height)) / radius;
  const project = (p: number[]) =>
    projectPoint(view, center, scale, surface, p);

  // z-axis for orientation
  surface.line(
    project([0, 0, -radius]),
    project([0, 0, radius]),
    "rgba(120,120,140,0.8)",
  );

  // paint back-to-front by mean view depth so overlaps look sane
  const depthOf = (face: number[]) => {
    let d = 0;
    for (const idx of face) {
      const v = mesh.vertices[idx]!;
      d += Math.cos(view.yaw) * v[1]! - Math.sin(view.yaw) * -v[0]!;
    }
    return d / face.length;
  };
  const order = mesh.faces
    .map((face, k) => ({ face, k, depth: depthOf(face) }))
    .sort((a, b) => a.depth - b.depth);

  let projected = 0;
  for (const { face } of order) {
    const pts = face.map((idx) => {
      projected += 1;
      return project(mesh.vertices[idx]!);
    });
    surface.polygon(pts, defectColor(0), "rgba(30,30,40,0.9)");
  }
  return { faces: mesh.faces.length, projected };
}

/** Adapter from a CanvasRenderingContext2D to the DrawSurface interface. */
export function canvasSurface(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
): DrawSurface {
  return {
    width,
    height,
    clear() {
      ctx.clearRect(0, 0, width, height);
    },
    polygon(points, fill, stroke) {
      if (!points.length) return;
      ctx.beginPath();
      ctx.moveTo(points[0]![0], points[0]![1]);
      for (const p of points.slice(1)) ctx.lineTo(p[0], p[1]);
      ctx.closePath();
      ctx.fillStyle = fill;
      ctx.fill();
      ctx.strokeStyle = stroke;
      ctx.stroke();
    },
    line(a, b, stroke) {
      ctx.beginPath();
      ctx.moveTo(a[0], a[1]);
      ctx.lineTo(b[0], b[1]);
      ctx.strokeStyle = stroke;
      ctx.stroke();
    },
    text(s, x, y, color) {
      ctx.fillStyle = color;
      ctx.fillText(s, x, y);
    },
  };
}
