/** Typed client for the chat service JSON API. */

export interface MessageReply {
  reply: string;
  matched: string[];
  stars: string[];
  fallback: boolean;
}

export interface SessionInfo {
  session_id: string;
  predicates: Record<string, string>;
  topic: string;
  turn_count: number;
  that: string;
}

export interface HealthInfo {
  status: string;
  categories: number;
  properties: number;
  sessions: number;
}

/** Non-2xx response, carrying the HTTP status and the server's message. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let message = response.statusText || `HTTP ${response.status}`;
  try {
    const body: unknown = await response.json();
    if (
      typeof body === "object" &&
      body !== null &&
      typeof (body as { error?: unknown }).error === "string"
    ) {
      message = (body as { error: string }).error;
    }
  } catch {
    // body was not JSON; keep the status text
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthInfo> {
    return this.request<HealthInfo>("/api/health");
  }

  async createSession(): Promise<string> {
    const data = await this.request<{ session_id: string }>("/api/sessions", {
      method: "POST",
    });
    return data.session_id;
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.request<SessionInfo>(
      `/api/sessions/${encodeURIComponent(sessionId)}`,
    );
  }

  sendMessage(sessionId: string, text: string): Promise<MessageReply> {
    return this.request<MessageReply>(
      `/api/sessions/${encodeURIComponent(sessionId)}/messages`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ text }),
      },
    );
  }
}
