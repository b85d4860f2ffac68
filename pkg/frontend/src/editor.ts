import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { SelectionState } from "./selection.js";
import type {
  CorrespondenceResponse,
  JointEditPayload,
  PartLabel,
  Quat,
  Vec3,
} from "./types.js";

export interface SixAxisDeltas {
  rx: number;
  ry: number;
  rz: number;
  tx: number;
  ty: number;
  tz: number;
}

export type PaintResult =
  | { kind: "edit"; historyLength: number }
  | { kind: "correspondence"; correspondence: CorrespondenceResponse }
  | { kind: "error"; message: string };

export type AdjustResult =
  | { kind: "edit"; historyLength: number; payload: JointEditPayload }
  | { kind: "noop" }
  | { kind: "error"; message: string };

function quatMultiply(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

function axisAngleQuat(axis: Vec3, angle: number): Quat {
  const half = angle / 2;
  const s = Math.sin(half);
  return [Math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s];
}

/** Rotation deltas from the three angle sliders, composed Z then Y then X. */
export function deltasToQuat(deltas: SixAxisDeltas): Quat {
  const qx = axisAngleQuat([1, 0, 0], deltas.rx);
  const qy = axisAngleQuat([0, 1, 0], deltas.ry);
  const qz = axisAngleQuat([0, 0, 1], deltas.rz);
  return quatMultiply(qz, quatMultiply(qy, qx));
}

/**
 * Weight painting controller: drives the color-button panel.
 *
 * Selected vertices are tracked in `pendingBlack` from the moment an edit is
 * issued until the service confirms it, so the viewport can render them in
 * black while the edit is in flight. Colors are always refetched from the
 * service after a confirmed edit, never recomputed locally.
 */
export class WeightEditor {
  readonly selection: SelectionState;
  private readonly client: ApiClient;
  private readonly projectId: string;
  private pendingBlack: Set<number> = new Set();
  private colors: [number, number, number][] = [];
  private busy = false;

  constructor(client: ApiClient, projectId: string, selection: SelectionState) {
    this.client = client;
    this.projectId = projectId;
    this.selection = selection;
  }

  get vertexColors(): [number, number, number][] {
    return this.colors;
  }

  get pendingVertices(): Set<number> {
    return new Set(this.pendingBlack);
  }

  get isBusy(): boolean {
    return this.busy;
  }

  async refreshColors(): Promise<void> {
    const labels = await this.client.getLabels(this.projectId);
    this.colors = labels.vertex_colors;
  }

  /**
   * Handle a color button click. With vertices selected this issues a weight
   * edit; with an empty selection it fetches the correspondence highlight
   * for that label instead.
   */
  async paintLabel(label: PartLabel): Promise<PaintResult> {
    if (this.busy) return { kind: "error", message: "another edit is in flight" };
    if (this.selection.isEmpty) {
      const correspondence = await this.client.getCorrespondence(this.projectId, label);
      return { kind: "correspondence", correspondence };
    }
    const vertices = this.selection.sortedIds();
    this.busy = true;
    this.pendingBlack = new Set(vertices);
    try {
      const ack = await this.client.postWeightEdit(this.projectId, { vertices, label });
      await this.refreshColors();
      this.pendingBlack.clear();
      this.selection.clear();
      return { kind: "edit", historyLength: ack.history_length };
    } catch (error) {
      this.pendingBlack.clear();
      if (error instanceof ApiError) {
        return { kind: "error", message: error.message };
      }
      throw error;
    } finally {
      this.busy = false;
    }
  }
}

/** Pose editing controller: drives the per-joint six-axis delta controls. */
export class PoseEditor {
  private readonly client: ApiClient;
  private readonly projectId: string;
  private totalFrames: number;
  private busy = false;

  constructor(client: ApiClient, projectId: string, totalFrames: number) {
    this.client = client;
    this.projectId = projectId;
    this.totalFrames = totalFrames;
  }

  get isBusy(): boolean {
    return this.busy;
  }

  setTotalFrames(totalFrames: number): void {
    this.totalFrames = totalFrames;
  }

  /**
   * Apply six-axis deltas to one joint at one frame. All-zero deltas issue
   * no request; an out-of-range frame is rejected before hitting the
   * service.
   */
  async jointAdjust(frame: number, joint: string, deltas: SixAxisDeltas): Promise<AdjustResult> {
    if (this.busy) return { kind: "error", message: "another edit is in flight" };
    if (frame < 0 || frame >= this.totalFrames) {
      return { kind: "error", message: `frame ${frame} out of range [0, ${this.totalFrames})` };
    }
    const allZero =
      deltas.rx === 0 &&
      deltas.ry === 0 &&
      deltas.rz === 0 &&
      deltas.tx === 0 &&
      deltas.ty === 0 &&
      deltas.tz === 0;
    if (allZero) return { kind: "noop" };
    const payload: JointEditPayload = {
      frame,
      joint,
      rot: deltasToQuat(deltas),
      trans: [deltas.tx, deltas.ty, deltas.tz],
    };
    this.busy = true;
    try {
      const ack = await this.client.postPoseEdit(this.projectId, payload);
      return { kind: "edit", historyLength: ack.history_length, payload };
    } catch (error) {
      if (error instanceof ApiError) {
        return { kind: "error", message: error.message };
      }
      throw error;
    } finally {
      this.busy = false;
    }
  }
}
