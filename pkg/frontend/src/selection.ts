/**
 * Vertex selection state and screen-space rectangle picking.
 *
 * Picking is purely a display-side convenience: it projects vertex positions
 * through the camera's view-projection matrix and tests the resulting screen
 * coordinates against the drag rectangle. The authoritative geometry and
 * weights always live on the server.
 */

export interface ScreenRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface Viewport {
  width: number;
  height: number;
}

export interface Camera {
  /** Combined view-projection matrix, row-major, length 16. */
  viewProjection: number[];
}

export class SelectionState {
  private ids: Set<number> = new Set();
  additive = false;

  get selected(): Set<number> {
    return new Set(this.ids);
  }

  /** Selection count shown in the UI; always equals the set size. */
  get count(): number {
    return this.ids.size;
  }

  get isEmpty(): boolean {
    return this.ids.size === 0;
  }

  replace(ids: Iterable<number>): void {
    this.ids = new Set(ids);
  }

  /** Apply a rectangle-select result, honoring the additive modifier. */
  apply(ids: Iterable<number>): void {
    if (this.additive) {
      for (const id of ids) this.ids.add(id);
    } else {
      this.replace(ids);
    }
  }

  clear(): void {
    this.ids.clear();
  }

  sortedIds(): number[] {
    return [...this.ids].sort((a, b) => a - b);
  }
}

function normalizeRect(rect: ScreenRect): ScreenRect {
  return {
    x0: Math.min(rect.x0, rect.x1),
    y0: Math.min(rect.y0, rect.y1),
    x1: Math.max(rect.x0, rect.x1),
    y1: Math.max(rect.y0, rect.y1),
  };
}

/**
 * Project a point through a row-major 4x4 matrix and return screen pixel
 * coordinates, or null when the point is behind the camera.
 */
export function projectToScreen(
  position: readonly [number, number, number],
  camera: Camera,
  viewport: Viewport,
): [number, number] | null {
  const m = camera.viewProjection;
  if (m.length !== 16) throw new Error("viewProjection must have 16 entries");
  const [x, y, z] = position;
  const cx = m[0] * x + m[1] * y + m[2] * z + m[3];
  const cy = m[4] * x + m[5] * y + m[6] * z + m[7];
  const cw = m[12] * x + m[13] * y + m[14] * z + m[15];
  if (cw <= 0) return null;
  const ndcX = cx / cw;
  const ndcY = cy / cw;
  return [(ndcX + 1) * 0.5 * viewport.width, (1 - ndcY) * 0.5 * viewport.height];
}

/**
 * Return the ids of all vertices whose screen projection falls inside the
 * rectangle. Vertices behind the camera are never selected. Positions are a
 * flat [x0,y0,z0, x1,y1,z1, ...] array as streamed by the service.
 */
export function rectangleSelect(
  rect: ScreenRect,
  camera: Camera,
  positions: readonly number[],
  viewport: Viewport,
): Set<number> {
  const box = normalizeRect(rect);
  const hits = new Set<number>();
  for (let i = 0; i * 3 + 2 < positions.length; i++) {
    const point = projectToScreen(
      [positions[i * 3], positions[i * 3 + 1], positions[i * 3 + 2]],
      camera,
      viewport,
    );
    if (point === null) continue;
    const [sx, sy] = point;
    if (sx >= box.x0 && sx <= box.x1 && sy >= box.y0 && sy <= box.y1) {
      hits.add(i);
    }
  }
  return hits;
}
