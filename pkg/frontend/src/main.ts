// Browser entry: wires the API client, view state, and the renderers.
// All math lives server-side; this file only fetches and re-renders.

import { ApiClient, ApiError } from "./api.js";
import { renderFieldOverlay } from "./fieldView.js";
import { memberPosition, renderMap, renderProfileCard } from "./mapView.js";
import {
  renderCategoryButtons,
  renderProxyForm,
  renderResults,
  renderUrgencyPicker,
} from "./queryPanel.js";
import {
  initialState,
  nextQuery,
  overlayStale,
  withOverlay,
  withOverlayData,
  withSnapshotTick,
  type OverlayMode,
  type Urgency,
  type ViewState,
} from "./state.js";
import type {
  Category,
  FieldPayload,
  GraphPayload,
  MemberProfile,
  ProxyDescriptor,
  Recommendation,
  TracePayload,
} from "./types.js";

const api = new ApiClient("");
let state: ViewState = initialState();
let members: MemberProfile[] = [];
let bounds = { min: [0, 0, 0], max: [20, 15, 3] };
let categories: Category[] = [];
let graph: GraphPayload | null = null;
let recommendation: Recommendation | null = null;
let trace: TracePayload | null = null;
let field: FieldPayload | null = null;
let origin = 0;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function banner(message: string | null): void {
  const node = el("banner");
  node.textContent = message ?? "";
  node.style.display = message ? "block" : "none";
}

function renderAll(): void {
  const byId = new Map(members.map((m) => [m.member_id, m]));
  el("map").innerHTML = renderMap(members, {
    bounds,
    top3: recommendation?.top3 ?? [],
    paths: state.overlay === "query_paths" ? trace?.paths ?? [] : [],
    trustEdges: state.overlay === "trust_edges" ? graph?.edges ?? [] : [],
    selected: state.selectedMember,
  });
  el("categories").innerHTML = renderCategoryButtons(categories, state.selectedCategory);
  el("urgency-box").innerHTML = renderUrgencyPicker(state.urgency);
  el("results").innerHTML = renderResults(recommendation, byId);
  el("field").innerHTML =
    state.overlay === "field_heatmap" && field
      ? renderFieldOverlay(field, { stale: overlayStale(state) })
      : "";
  for (const mode of ["none", "field_heatmap", "trust_edges", "query_paths"]) {
    el(`overlay-${mode}`).classList.toggle("active", state.overlay === mode);
  }
}

async function refreshSnapshot(): Promise<void> {
  const payload = await api.members();
  members = payload.members;
  state = withSnapshotTick(state, payload.tick);
  origin = members.length > 0 ? (members[0]?.member_id ?? 0) : 0;
}

function currentUser(): number | ProxyDescriptor {
  const enabled = document.getElementById("proxy-enabled") as HTMLInputElement | null;
  if (!enabled?.checked) return origin;
  const gender = (document.getElementById("proxy-gender") as HTMLSelectElement).value;
  const grade = (document.getElementById("proxy-grade") as HTMLInputElement).value;
  const languages = (document.getElementById("proxy-languages") as HTMLInputElement)
    .value.split(",").map((s) => s.trim()).filter((s) => s.length > 0);
  const descriptor: ProxyDescriptor = {};
  if (gender) descriptor.gender = gender;
  if (grade) descriptor.grade = Number(grade);
  if (languages.length > 0) descriptor.languages = languages;
  return descriptor;
}

async function runQuery(category: string): Promise<void> {
  state = nextQuery(state, category);
  if (!state.activeQueryId) return;
  recommendation = await api.recommend({
    query_id: state.activeQueryId,
    user: currentUser(),
    category,
    urgency: state.urgency,
    user_languages: ["en"],
  });
  trace = await api.trace(state.activeQueryId);
  if (state.overlay === "field_heatmap") await refreshField();
  renderAll();
}

async function refreshField(): Promise<void> {
  if (!state.activeQueryId) return;
  const cursor = state.probeCursor ?? { x: 10, y: 7.5 };
  field = await api.field({
    query_id: state.activeQueryId,
    hip: [cursor.x, cursor.y, 0],
    grid: {
      min: [bounds.min[0] ?? 0, bounds.min[1] ?? 0, 0],
      max: [bounds.max[0] ?? 20, bounds.max[1] ?? 15, 0],
      shape: [40, 30, 1],
    },
  });
  state = withOverlayData(state, state.snapshotTick);
}

async function submitRating(subject: number, value: number): Promise<void> {
  if (!state.selectedCategory) return;
  await api.submitRatings([
    { rater: origin, subject, category: state.selectedCategory, value },
  ]);
  await refreshSnapshot();
  graph = await api.graph();
  // re-run the query so the ranking reflects the new trust state
  await runQuery(state.selectedCategory);
}

function wireEvents(): void {
  el("categories").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-category]");
    if (!target) return;
    void runQuery(target.getAttribute("data-category") ?? "").catch(showError);
  });
  el("results").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const subject = Number(target.getAttribute("data-subject"));
    if (target.classList.contains("rate-up")) {
      void submitRating(subject, 1).catch(showError);
    } else if (target.classList.contains("rate-down")) {
      void submitRating(subject, -1).catch(showError);
    }
  });
  el("map").addEventListener("mouseover", (event) => {
    const target = (event.target as HTMLElement).closest("[data-member-id]");
    if (!target) return;
    const id = Number(target.getAttribute("data-member-id"));
    void api.member(id).then((detail) => {
      el("profile").innerHTML = renderProfileCard(detail);
    }).catch(showError);
  });
  el("map").addEventListener("mousemove", (event) => {
    if (state.overlay !== "field_heatmap") return;
    const svg = el("map").querySelector("svg");
    if (!svg) return;
    const rect = svg.getBoundingClientRect();
    const fx = (event.clientX - rect.left) / rect.width;
    const fy = 1 - (event.clientY - rect.top) / rect.height;
    const min = bounds.min, max = bounds.max;
    state.probeCursor = {
      x: (min[0] ?? 0) + fx * ((max[0] ?? 20) - (min[0] ?? 0)),
      y: (min[1] ?? 0) + fy * ((max[1] ?? 15) - (min[1] ?? 0)),
    };
    throttledField();
  });
  for (const mode of ["none", "field_heatmap", "trust_edges", "query_paths"] as OverlayMode[]) {
    el(`overlay-${mode}`).addEventListener("click", () => {
      state = withOverlay(state, mode);
      const work = state.overlay === "field_heatmap" && !field
        ? refreshField() : Promise.resolve();
      void work.then(renderAll).catch(showError);
    });
  }
  document.addEventListener("change", (event) => {
    const target = event.target as HTMLSelectElement;
    if (target.id === "urgency") {
      state.urgency = target.value as Urgency;
      if (state.selectedCategory) void runQuery(state.selectedCategory).catch(showError);
    }
  });
}

let fieldTimer: number | undefined;
function throttledField(): void {
  if (fieldTimer !== undefined) return;
  fieldTimer = window.setTimeout(() => {
    fieldTimer = undefined;
    void refreshField().then(renderAll).catch(showError);
  }, 150);
}

function showError(error: unknown): void {
  if (error instanceof ApiError) {
    banner(`engine says: ${error.message} (${error.code})`);
  } else {
    banner("engine unreachable; retrying may help");
  }
}

async function boot(): Promise<void> {
  try {
    await refreshSnapshot();
    categories = (await api.categories()).categories;
    graph = await api.graph();
    banner(null);
    // rendered once so typed-in values survive re-renders
    el("proxy-box").innerHTML = renderProxyForm(false);
    renderAll();
    wireEvents();
  } catch (error) {
    showError(error);
  }
}

void boot();
export { memberPosition };
