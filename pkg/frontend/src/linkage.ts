// Side panel: the planar linkage obtained by rotating every profile plane
// into a common one. Chains come straight from the server's mesh payload;
// in flat mode the coupling rates decorate the strips with their signs.

import type { LinkagePayload } from "./types.js";
import type { DrawSurface } from "./render3d.js";

export interface LinkageStyle {
  axis: string;
  bar: string;
  vertex: string;
  apex: string;
  expand: string;
  contract: string;
}

export const DEFAULT_STYLE: LinkageStyle = {
  axis: "rgba(120,120,140,0.9)",
  bar: "rgba(40,60,150,0.9)",
  vertex: "rgba(20,20,30,1)",
  apex: "rgba(170,40,40,1)",
  expand: "rgba(200,60,60,0.9)",
  contract: "rgba(60,160,90,0.9)",
};

interface Frame {
  toPx(r: number, z: number): [number, number];
}

function fitFrame(payload: LinkagePayload, surface: DrawSurface): Frame {
  let rLo = 0, rHi = 0;
  let zLo = Math.min(...payload.apex_z);
  let zHi = Math.max(...payload.apex_z);
  for (const col of payload.columns) {
    for (const [r, z] of col.map((p) => [p[0]!, p[1]!] as const)) {
      rLo = Math.min(rLo, r);
      rHi = Math.max(rHi, r);
      zLo = Math.min(zLo, z);
      zHi = Math.max(zHi, z);
    }
  }
  const span = Math.max(rHi - rLo, zHi - zLo, 1e-9);
  const scale = (0.85 * Math.min(surface.width, surface.height)) / span;
  const rMid = (rLo + rHi) / 2;
  const zMid = (zLo + zHi) / 2;
  return {
    toPx: (r, z) => [
      surface.width / 2 + (r - rMid) * scale,
      surface.height / 2 - (z - zMid) * scale,
    ],
  };
}

export function drawLinkage(
  surface: DrawSurface,
  payload: LinkagePayload,
  couplingRates: number[][] | null = null,
  style: LinkageStyle = DEFAULT_STYLE,
): void {
  surface.clear();
  const frame = fitFrame(payload, surface);

  const zs = payload.apex_z;
  surface.line(
    frame.toPx(0, Math.min(...zs) - 0.3),
    frame.toPx(0, Math.max(...zs) + 0.3),
    style.axis,
  );

  payload.columns.forEach((col, i) => {
    // bars run apex -> vertex -> apex up the chain
    col.forEach((p, j) => {
      const v = frame.toPx(p[0]!, p[1]!);
      surface.line(frame.toPx(0, zs[j]!), v, style.bar);
      surface.line(v, frame.toPx(0, zs[j + 1]!), style.bar);
      surface.text("", v[0], v[1], style.vertex);
    });
    // coupling decorations against the previous column
    if (couplingRates && i > 0) {
      const rates = couplingRates[i - 1];
      if (rates) {
        col.forEach((p, j) => {
          const prev = payload.columns[i - 1]![j]!;
          const rate = rates[j] ?? 0;
          surface.line(
            frame.toPx(prev[0]!, prev[1]!),
            frame.toPx(p[0]!, p[1]!),
            rate > 0 ? style.expand : style.contract,
          );
        });
      }
    }
  });

  zs.forEach((z, j) => {
    const [x, y] = frame.toPx(0, z);
    surface.text(`S${j}`, x + 4, y, style.apex);
  });
}
