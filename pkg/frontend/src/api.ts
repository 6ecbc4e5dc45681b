import type {
  AnalysisPayload,
  AnalyzeRequestBody,
  AnalyzeStarted,
  SessionInfo,
} from "./types";

let apiBase = "/v1";

export function setApiBase(base: string): void {
  apiBase = base.replace(/\/$/, "");
}

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `request failed (${response.status})`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status-line message
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export function uploadSession(files: File[]): Promise<SessionInfo> {
  const form = new FormData();
  for (const file of files) form.append("files", file, file.name);
  return fetch(`${apiBase}/sessions`, { method: "POST", body: form }).then(
    (r) => asJson<SessionInfo>(r),
  );
}

export function startAnalysis(
  sessionId: string,
  body: AnalyzeRequestBody,
  signal?: AbortSignal,
): Promise<AnalyzeStarted> {
  return fetch(`${apiBase}/sessions/${sessionId}/analyze`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
    signal,
  }).then((r) => asJson<AnalyzeStarted>(r));
}

export function fetchAnalysis(
  analysisId: string,
  signal?: AbortSignal,
): Promise<AnalysisPayload> {
  return fetch(`${apiBase}/analyses/${analysisId}`, { signal }).then((r) =>
    asJson<AnalysisPayload>(r),
  );
}
