import { describe, expect, it } from "vitest";

import {
  projectToScreen,
  rectangleSelect,
  SelectionState,
  type Camera,
  type Viewport,
} from "../src/selection.js";

// Simple perspective camera looking down +z: clip w equals the point's z,
// so anything with z <= 0 is behind the camera.
const CAMERA: Camera = {
  viewProjection: [
    1, 0, 0, 0,
    0, 1, 0, 0,
    0, 0, 1, 0,
    0, 0, 1, 0,
  ],
};
const VIEWPORT: Viewport = { width: 200, height: 100 };
const FULL_RECT = { x0: 0, y0: 0, x1: 200, y1: 100 };

// Four vertices in front of the camera, one behind.
const POSITIONS = [
  0, 0, 1,
  0.5, 0.5, 1,
  -0.5, -0.5, 1,
  2, 2, 4,
  0, 0, -1,
];

describe("rectangleSelect", () => {
  it("selects all front-projected vertices with a full-viewport rect", () => {
    const hits = rectangleSelect(FULL_RECT, CAMERA, POSITIONS, VIEWPORT);
    expect([...hits].sort((a, b) => a - b)).toEqual([0, 1, 2, 3]);
  });

  it("returns the empty set for an empty rect", () => {
    const rect = { x0: 50, y0: 50, x1: 50, y1: 50 };
    const hits = rectangleSelect(rect, CAMERA, [10, 10, 1], VIEWPORT);
    expect(hits.size).toBe(0);
  });

  it("normalizes a rect dragged from any corner", () => {
    const forward = rectangleSelect(FULL_RECT, CAMERA, POSITIONS, VIEWPORT);
    const backward = rectangleSelect(
      { x0: 200, y0: 100, x1: 0, y1: 0 },
      CAMERA,
      POSITIONS,
      VIEWPORT,
    );
    expect(backward).toEqual(forward);
  });

  it("never selects vertices behind the camera", () => {
    const hits = rectangleSelect(FULL_RECT, CAMERA, [0, 0, -1, 0, 0, 0], VIEWPORT);
    expect(hits.size).toBe(0);
  });

  it("unions two disjoint rects in additive mode", () => {
    // Vertex 1 projects to (175, 25), vertex 2 to (25, 75).
    const positions = [0.5, 0.5, 1, -0.5, -0.5, 1];
    const topRight = { x0: 150, y0: 0, x1: 200, y1: 50 };
    const bottomLeft = { x0: 0, y0: 50, x1: 50, y1: 100 };

    const state = new SelectionState();
    state.apply(rectangleSelect(topRight, CAMERA, positions, VIEWPORT));
    expect(state.sortedIds()).toEqual([0]);

    state.additive = true;
    state.apply(rectangleSelect(bottomLeft, CAMERA, positions, VIEWPORT));
    expect(state.sortedIds()).toEqual([0, 1]);

    state.additive = false;
    state.apply(rectangleSelect(bottomLeft, CAMERA, positions, VIEWPORT));
    expect(state.sortedIds()).toEqual([1]);
  });
});

describe("projectToScreen", () => {
  it("maps clip-space center to the viewport center", () => {
    expect(projectToScreen([0, 0, 1], CAMERA, VIEWPORT)).toEqual([100, 50]);
  });

  it("returns null for points behind the camera", () => {
    expect(projectToScreen([0, 0, -2], CAMERA, VIEWPORT)).toBeNull();
  });

  it("applies the perspective divide", () => {
    expect(projectToScreen([2, 2, 4], CAMERA, VIEWPORT)).toEqual([150, 25]);
  });
});

describe("SelectionState", () => {
  it("keeps the displayed count equal to the set size", () => {
    const state = new SelectionState();
    expect(state.count).toBe(0);
    expect(state.isEmpty).toBe(true);
    state.replace([3, 1, 3, 2]);
    expect(state.count).toBe(3);
    state.clear();
    expect(state.count).toBe(0);
  });

  it("exposes a defensive copy of the selected set", () => {
    const state = new SelectionState();
    state.replace([1]);
    state.selected.add(2);
    expect(state.count).toBe(1);
  });
});
