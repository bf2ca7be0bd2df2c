import { describe, expect, it } from "vitest";

import {
  initialState,
  nextQuery,
  overlayStale,
  withOverlay,
  withOverlayData,
  withSnapshotTick,
} from "../src/state.js";

describe("view state", () => {
  it("refuses query-bound overlays before any query ran", () => {
    const state = initialState();
    expect(withOverlay(state, "field_heatmap").overlay).toBe("none");
    expect(withOverlay(state, "query_paths").overlay).toBe("none");
    expect(withOverlay(state, "trust_edges").overlay).toBe("trust_edges");
  });

  it("allows the field overlay once a query is active", () => {
    const state = nextQuery(initialState(), "c03");
    expect(state.activeQueryId).toBe("ui-1-c03");
    expect(withOverlay(state, "field_heatmap").overlay).toBe("field_heatmap");
  });

  it("issues fresh query ids per request", () => {
    const first = nextQuery(initialState(), "c01");
    const second = nextQuery(first, "c01");
    expect(second.activeQueryId).not.toBe(first.activeQueryId);
  });

  it("flags overlay data recorded at an older snapshot as stale", () => {
    let state = withSnapshotTick(initialState(), 4);
    state = withOverlayData(state, 4);
    expect(overlayStale(state)).toBe(false);
    state = withSnapshotTick(state, 5); // a mutation landed
    expect(overlayStale(state)).toBe(true);
    expect(overlayStale(initialState())).toBe(false);
  });
});
