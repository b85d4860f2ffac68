import type {
  ConnectivityResponse,
  CorrespondenceResponse,
  EditAck,
  FramePositionsResponse,
  JointEditPayload,
  LabelsResponse,
  MotransStatus,
  PartLabel,
  ProjectInfo,
  WeightEditPayload,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown>; text(): Promise<string> }>;

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

async function failFrom(response: { status: number; json(): Promise<unknown> }): Promise<never> {
  let detail = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body, keep the generic message
  }
  throw new ApiError(response.status, detail);
}

/**
 * Thin typed wrapper over the retargeting service HTTP API.
 *
 * The fetch implementation is injected so contract tests can run against a
 * recorded service without any network or DOM.
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) await failFrom(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, payload?: unknown): Promise<T> {
    const init: { method: string; headers?: Record<string, string>; body?: string } = {
      method: "POST",
    };
    if (payload !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(payload);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) await failFrom(response);
    return (await response.json()) as T;
  }

  getProject(projectId: string): Promise<ProjectInfo> {
    return this.getJson(`/projects/${projectId}`);
  }

  postWeightEdit(projectId: string, payload: WeightEditPayload): Promise<EditAck> {
    return this.postJson(`/projects/${projectId}/weight-edits`, payload);
  }

  postPoseEdit(projectId: string, payload: JointEditPayload): Promise<EditAck> {
    return this.postJson(`/projects/${projectId}/pose-edits`, payload);
  }

  startMotrans(projectId: string): Promise<MotransStatus> {
    return this.postJson(`/projects/${projectId}/motrans`);
  }

  motransStatus(projectId: string): Promise<MotransStatus> {
    return this.getJson(`/projects/${projectId}/motrans`);
  }

  getLabels(projectId: string): Promise<LabelsResponse> {
    return this.getJson(`/projects/${projectId}/labels`);
  }

  getCorrespondence(projectId: string, label: PartLabel): Promise<CorrespondenceResponse> {
    return this.getJson(`/projects/${projectId}/correspondence/${label}`);
  }

  getFramePositions(projectId: string, frame: number): Promise<FramePositionsResponse> {
    return this.getJson(`/projects/${projectId}/frames/${frame}?format=json`);
  }

  getConnectivity(projectId: string): Promise<ConnectivityResponse> {
    return this.getJson(`/projects/${projectId}/connectivity`);
  }
}
