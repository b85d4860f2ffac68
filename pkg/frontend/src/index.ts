export { ApiClient, ApiError } from "./api.js";
export type { FetchLike } from "./api.js";
export {
  deltasToQuat,
  PoseEditor,
  WeightEditor,
} from "./editor.js";
export type { AdjustResult, PaintResult, SixAxisDeltas } from "./editor.js";
export { ScrubberState } from "./scrubber.js";
export {
  projectToScreen,
  rectangleSelect,
  SelectionState,
} from "./selection.js";
export type { Camera, ScreenRect, Viewport } from "./selection.js";
export type {
  ConnectivityResponse,
  CorrespondenceResponse,
  EditAck,
  FramePositionsResponse,
  JointEditPayload,
  LabelsResponse,
  MotransStatus,
  PartLabel,
  ProjectInfo,
  Quat,
  Vec3,
  WeightEditPayload,
} from "./types.js";
