// Typed client for the geckograph HTTP API.  Every type string shown in the
// UI originates from one of these calls; nothing is computed client-side.

export interface PerLevelRecord {
  level: number;
  outcome: string;
  elapsed: number;
  attempts: number;
  gecko_shown: boolean;
}

export interface SessionState {
  session_id: string;
  group: number;
  experience: string;
  level_index: number;
  skips_remaining: number;
  complete: boolean;
  gecko_shown: boolean;
  per_level: PerLevelRecord[];
}

export interface FunctionView {
  name: string;
  text: string;
  svg?: string;
}

export interface LevelView {
  number: number;
  title: string;
  target: { text: string; svg?: string };
  functions: FunctionView[];
}

export interface SessionBundle {
  session: SessionState;
  level: LevelView;
}

export interface InferError {
  kind: string;
  message?: string;
  offset?: number;
  name?: string;
  [key: string]: unknown;
}

export interface InferResult {
  inferred?: string;
  svg?: string;
  error?: InferError;
}

export interface AttemptPayload {
  status: string;
  inferred?: string;
  diagnostics?: Record<string, unknown>;
  diff?: Record<string, unknown>;
  diff_svgs?: { left: string; right: string };
  session: SessionState;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: Record<string, unknown>,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(body)}`);
  }

  get kind(): string {
    return typeof this.body.kind === "string" ? this.body.kind : "unknown";
  }
}

export class Client {
  constructor(private baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.baseUrl + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload);
    }
    return payload as T;
  }

  createSession(opts: {
    group?: number;
    experience?: string;
  } = {}): Promise<SessionBundle> {
    return this.request("POST", "/sessions", opts);
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  getLevel(number: number, sessionId?: string): Promise<LevelView> {
    const query = sessionId ? `?session=${encodeURIComponent(sessionId)}` : "";
    return this.request("GET", `/levels/${number}${query}`);
  }

  attempt(sessionId: string, code: string): Promise<AttemptPayload> {
    return this.request("POST", `/sessions/${sessionId}/attempts`, { code });
  }

  skip(sessionId: string): Promise<SessionState> {
    return this.request("POST", `/sessions/${sessionId}/skip`);
  }

  infer(code: string, level: number, sessionId?: string): Promise<InferResult> {
    const body: Record<string, unknown> = { code, level };
    if (sessionId) body.session = sessionId;
    return this.request("POST", "/infer", body);
  }

  async renderType(type: string, mode = "full"): Promise<string> {
    const query = `?type=${encodeURIComponent(type)}&mode=${mode}&format=svg`;
    const resp = await fetch(this.baseUrl + "/render" + query);
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.json());
    }
    return resp.text();
  }
}
