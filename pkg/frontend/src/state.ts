// View state and its pure transitions. Overlay data is tied to the
// snapshot tick it was fetched at; when the community moves on, the
// overlay is flagged stale instead of silently lying.

export type OverlayMode = "none" | "field_heatmap" | "trust_edges" | "query_paths";
export type Urgency = "immediate" | "today" | "whenever";

export interface ViewState {
  selectedMember: number | null;
  selectedCategory: string | null;
  activeQueryId: string | null;
  urgency: Urgency;
  overlay: OverlayMode;
  probeCursor: { x: number; y: number } | null;
  snapshotTick: number;
  overlayTick: number | null;
  queryCounter: number;
}

export function initialState(): ViewState {
  return {
    selectedMember: null,
    selectedCategory: null,
    activeQueryId: null,
    urgency: "whenever",
    overlay: "none",
    probeCursor: null,
    snapshotTick: 0,
    overlayTick: null,
    queryCounter: 0,
  };
}

export function withOverlay(state: ViewState, overlay: OverlayMode): ViewState {
  // field and path overlays need a query to visualize
  if ((overlay === "field_heatmap" || overlay === "query_paths") && !state.activeQueryId) {
    return { ...state, overlay: "none" };
  }
  return { ...state, overlay };
}

export function withSnapshotTick(state: ViewState, tick: number): ViewState {
  return { ...state, snapshotTick: tick };
}

export function withOverlayData(state: ViewState, tick: number): ViewState {
  return { ...state, overlayTick: tick };
}

export function overlayStale(state: ViewState): boolean {
  return state.overlayTick !== null && state.overlayTick !== state.snapshotTick;
}

export function nextQuery(state: ViewState, category: string): ViewState {
  const counter = state.queryCounter + 1;
  return {
    ...state,
    selectedCategory: category,
    activeQueryId: `ui-${counter}-${category}`,
    queryCounter: counter,
  };
}
