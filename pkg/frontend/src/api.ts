// Typed client for the workbench service. All payload shapes mirror the
// JSON the service emits; nothing here invents data the backend did not send.

export interface Suggestion {
  category: string;
  agreement: string;
  surfaces: string[];
}

export interface LookaheadResponse {
  depth_used: number;
  fragments: string[];
  suggestions: Suggestion[];
}

export interface RuleCard {
  id: number;
  head: string | null;
  pbl: string[];
  nbl: string[];
  is_constraint: boolean;
}

export interface ModelResponse {
  status: "satisfiable" | "unsatisfiable";
  model: string[];
  violated: number[];
}

export interface CommitResponse {
  trees: number;
  rules: RuleCard[];
  model: ModelResponse;
}

export interface ApiError {
  error: string;
  message?: string;
  surface?: string;
  position?: number;
}

export class ServiceError extends Error {
  detail: ApiError;

  constructor(detail: ApiError) {
    super(detail.message ?? detail.error);
    this.detail = detail;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  private base: string;
  private fetchImpl: FetchLike;

  constructor(base = "http://127.0.0.1:8000", fetchImpl: FetchLike = fetch.bind(globalThis)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await response.json();
    if (!response.ok) {
      const detail: ApiError =
        typeof body.detail === "object" ? body.detail : { error: String(body.detail) };
      throw new ServiceError(detail);
    }
    return body as T;
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("/sessions", { method: "POST" });
    return body.session_id;
  }

  lookahead(sessionId: string, prefix: string): Promise<LookaheadResponse> {
    return this.request(`/sessions/${sessionId}/lookahead`, {
      method: "POST",
      body: JSON.stringify({ prefix }),
    });
  }

  commitSentence(sessionId: string, text: string): Promise<CommitResponse> {
    return this.request(`/sessions/${sessionId}/sentences`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  model(sessionId: string): Promise<ModelResponse> {
    return this.request(`/sessions/${sessionId}/model`);
  }

  kb(sessionId: string): Promise<string> {
    return this.request<{ kb: string }>(`/sessions/${sessionId}/kb`).then((b) => b.kb);
  }

  retractLast(sessionId: string): Promise<ModelResponse> {
    return this.request(`/sessions/${sessionId}/sentences/last`, { method: "DELETE" });
  }
}
