// DOM wiring for the designer. Server-authoritative: this file computes no
// geometry; it edits the draft, posts it, and renders whatever the service
// returns.

import { ApiClient, ServiceError } from "./api.js";
import {
  directionAngleOf,
  markersFromReport,
  moveVertex,
  setApexZ,
  setDirectionAngle,
  setVertexZ,
  toggleApexSign,
} from "./editors.js";
import { canvasSurface, drawMesh } from "./render3d.js";
import { drawLinkage } from "./linkage.js";
import {
  applySwitch,
  diagnosticsReceived,
  initialSession,
  intervalRefreshed,
  limitMarkers,
  modelLoaded,
  modelRejected,
  setT,
  switchableLimitAt,
  type SessionState,
} from "./session.js";
import type { MeshPayload, ModelFile } from "./types.js";

const STARTER: ModelFile = {
  trajectory: [
    [2.0, 0.0, 0.0],
    [0.75, 1.299038105676658, 1.0],
  ],
  directions: [{ angle: 0.0 }, { angle: 60.0 }],
  apexes: [{ z: -1.0 }, { z: 2.0, sign: "+" }, { z: 4.0 }],
};

const api = new ApiClient("");
let state: SessionState = initialSession(STARTER);
let lastMesh: MeshPayload | null = null;
let flatRates: number[][] | null = null;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const meshCanvas = $<HTMLCanvasElement>("mesh-canvas");
const linkCanvas = $<HTMLCanvasElement>("linkage-canvas");
const slider = $<HTMLInputElement>("t-slider");
const tLabel = $<HTMLSpanElement>("t-value");
const switchBtn = $<HTMLButtonElement>("switch-branch");
const markersBox = $<HTMLDivElement>("markers");
const badges = $<HTMLDivElement>("badges");
const editorsBox = $<HTMLDivElement>("editors");
const markerTrack = $<HTMLDivElement>("limit-markers");
const panel = $<HTMLDivElement>("analysis-panel");

function renderMesh(): void {
  if (!lastMesh) return;
  const ctx = meshCanvas.getContext("2d");
  if (!ctx) return;
  drawMesh(
    canvasSurface(ctx, meshCanvas.width, meshCanvas.height),
    lastMesh,
    state.view,
  );
  const lctx = linkCanvas.getContext("2d");
  if (lctx) {
    drawLinkage(
      canvasSurface(lctx, linkCanvas.width, linkCanvas.height),
      lastMesh.linkage,
      flatRates,
    );
  }
}

function renderBadges(): void {
  const d = state.diagnostics;
  badges.innerHTML = "";
  const add = (text: string, ok: boolean) => {
    const el = document.createElement("span");
    el.className = ok ? "badge ok" : "badge warn";
    el.textContent = text;
    badges.appendChild(el);
  };
  add(`model: ${state.classification ?? "none"}`, state.modelId !== null);
  if (d) {
    add(`edge drift ${d.max_isometry_deviation.toExponential(1)}`,
        d.max_isometry_deviation < 1e-8);
    add(`planarity ${d.max_planarity_defect.toExponential(1)}`,
        d.max_planarity_defect < 1e-8);
    if (d.tangent_strips.length) add(`at limit: strips ${d.tangent_strips}`, true);
  }
  if (state.flips.length) add(`flipped strips: ${state.flips.join(", ")}`, true);
}

function renderMarkers(): void {
  markersBox.innerHTML = "";
  if (!state.report) return;
  for (const m of markersFromReport(state.report)) {
    const el = document.createElement("div");
    el.className = `marker ${m.severity}`;
    const where = m.index !== null ? ` [${m.target} ${m.index}]` : ` [${m.target}]`;
    el.textContent = `${m.code}${where}: ${m.message}`;
    markersBox.appendChild(el);
  }
}

function renderSlider(): void {
  const iv = state.interval;
  slider.disabled = iv === null;
  switchBtn.disabled = true;
  markerTrack.innerHTML = "";
  if (!iv) return;
  const span = iv.t_mu - iv.t_lambda;
  slider.value = span > 0
    ? String((state.t - iv.t_lambda) / span)
    : "0";
  tLabel.textContent = `t = ${state.t.toFixed(6)}`;
  for (const { fraction } of limitMarkers(iv)) {
    const tick = document.createElement("div");
    tick.className = "limit-tick";
    tick.style.left = `${(fraction * 100).toFixed(2)}%`;
    markerTrack.appendChild(tick);
  }
  switchBtn.disabled = switchableLimitAt(iv, state.t) === null;
}

async function refreshMesh(): Promise<void> {
  if (!state.modelId) return;
  try {
    const mesh = await api.getMesh(state.modelId, state.t, state.flips);
    lastMesh = mesh;
    state = diagnosticsReceived(state, mesh.diagnostics);
    renderMesh();
    renderBadges();
  } catch (err) {
    if (err instanceof ServiceError) {
      badges.innerHTML = `<span class="badge warn">${err.payload.code}</span>`;
    }
  }
}

async function postDraft(): Promise<void> {
  try {
    const created = await api.createModel(state.draft);
    state = modelLoaded(state, created);
    flatRates = null;
    if (created.classification === "flat") {
      const flat = await api.getFlatcheck(created.id).catch(() => null);
      if (flat && flat.coupling_rates) flatRates = flat.coupling_rates;
      panel.textContent = flat ? `flat pattern: ${flat.verdict}` : "";
    } else {
      const tube = await api.getTube(created.id).catch(() => null);
      panel.textContent = tube && tube.closed
        ? `tube: ${tube.class}` : "";
    }
    renderMarkers();
    renderSlider();
    await refreshMesh();
  } catch (err) {
    if (err instanceof ServiceError && err.report) {
      state = modelRejected(state, err.report);
      renderMarkers();
      renderSlider();
      renderBadges();
    } else {
      throw err;
    }
  }
}

function rebuildEditors(): void {
  editorsBox.innerHTML = "";
  const draft = state.draft;

  draft.trajectory.forEach((v, i) => {
    const row = document.createElement("div");
    row.className = "editor-row";
    row.append(`V${i} `);
    (["x", "y", "z"] as const).forEach((axis, k) => {
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.05";
      input.value = String(v[k]);
      input.addEventListener("change", () => {
        const val = Number(input.value);
        state.draft = k === 2
          ? setVertexZ(draft, i, val)
          : moveVertex(
              draft,
              i,
              k === 0 ? val : draft.trajectory[i]![0]!,
              k === 1 ? val : draft.trajectory[i]![1]!,
            );
        void postDraft().then(rebuildEditors);
      });
      row.append(` ${axis}:`, input);
    });
    const dial = document.createElement("input");
    dial.type = "number";
    dial.step = "1";
    dial.value = directionAngleOf(draft, i).toFixed(1);
    dial.addEventListener("change", () => {
      state.draft = setDirectionAngle(draft, i, Number(dial.value));
      void postDraft().then(rebuildEditors);
    });
    row.append(" dir°:", dial);
    editorsBox.appendChild(row);
  });

  draft.apexes.forEach((apex, j) => {
    const row = document.createElement("div");
    row.className = "editor-row apex";
    row.append(`S${j} z:`);
    const input = document.createElement("input");
    input.type = "number";
    input.step = "0.05";
    input.value = String(apex.z);
    input.addEventListener("change", () => {
      state.draft = setApexZ(draft, j, Number(input.value));
      void postDraft().then(rebuildEditors);
    });
    row.append(input);
    if (j > 0 && j < draft.apexes.length - 1) {
      const btn = document.createElement("button");
      btn.textContent = apex.sign ?? "+";
      btn.addEventListener("click", () => {
        state.draft = toggleApexSign(draft, j);
        void postDraft().then(rebuildEditors);
      });
      row.append(" sign:", btn);
    }
    editorsBox.appendChild(row);
  });
}

slider.addEventListener("input", () => {
  const iv = state.interval;
  if (!iv) return;
  const t = iv.t_lambda + Number(slider.value) * (iv.t_mu - iv.t_lambda);
  state = setT(state, t);
  renderSlider();
  void refreshMesh();
});

switchBtn.addEventListener("click", async () => {
  const iv = state.interval;
  if (!iv || !state.modelId) return;
  const limit = switchableLimitAt(iv, state.t);
  if (!limit) return;
  const modelId = state.modelId;
  state = applySwitch(state, limit);
  const refreshed = await api.getLimits(modelId, state.flips);
  state = intervalRefreshed(state, refreshed);
  renderSlider();
  await refreshMesh();
});

meshCanvas.addEventListener("mousemove", (ev) => {
  if (ev.buttons !== 1) return;
  state.view.yaw += ev.movementX * 0.01;
  state.view.pitch = Math.min(
    1.5,
    Math.max(-1.5, state.view.pitch + ev.movementY * 0.01),
  );
  renderMesh();
});

rebuildEditors();
void postDraft();
