/**
 * Shared wire and domain types for the editor.
 *
 * The editor never computes weights, colors, or deformed geometry itself;
 * everything displayed is fetched from the service, so these types mirror
 * the service JSON responses exactly.
 */

/** Quaternion in scalar-first order, matching the service wire format. */
export type Quat = [number, number, number, number];

export type Vec3 = [number, number, number];

/** Body part label index into the project's weight matrix columns. */
export type PartLabel = number;

export interface WeightEditPayload {
  vertices: number[];
  label: PartLabel;
}

export interface JointEditPayload {
  frame: number;
  joint: string;
  rot: Quat;
  trans: Vec3;
}

export interface ProjectInfo {
  id: string;
  stage: string;
  history_length: number;
  frame_count: number | null;
}

export interface LabelsResponse {
  palette: Record<string, [number, number, number]>;
  vertex_colors: [number, number, number][];
}

export interface CorrespondenceResponse {
  label: PartLabel;
  source_vertices: number[];
  target_vertices: number[];
}

export interface FramePositionsResponse {
  frame: number;
  positions: number[];
}

export interface ConnectivityResponse {
  faces: number[][];
}

export interface MotransStatus {
  status: "running" | "done" | "error";
  cache_hit?: boolean;
  frame_count?: number;
  detail?: string;
}

export interface EditAck {
  history_length: number;
}
