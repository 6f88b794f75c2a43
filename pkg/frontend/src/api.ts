/** Typed client for the answer service; no interpretation happens here. */

export type Mode = "internal" | "external";

export interface AnswerPayload {
  doc: string;
  sent: number;
  text: string;
  /** Half-open [start, end) character ranges, sorted and non-overlapping. */
  spans: [number, number][];
  score: number;
}

export interface QueryResponse {
  answers: AnswerPayload[];
  elapsedMs: number;
}

export interface HealthResponse {
  status: "ok";
  docs: number;
}

/** Non-2xx response with the server's error code ("unparseable_query", ...). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail?: string,
  ) {
    super(`${status} ${code}`);
    this.name = "ApiError";
  }
}

export interface QueryClient {
  query(question: string, mode: Mode, signal?: AbortSignal): Promise<QueryResponse>;
  health(): Promise<HealthResponse>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AskClient implements QueryClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  async query(question: string, mode: Mode, signal?: AbortSignal): Promise<QueryResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question, mode }),
      signal,
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, ...(await errorParts(resp)));
    }
    return (await resp.json()) as QueryResponse;
  }

  async health(): Promise<HealthResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/health`);
    if (!resp.ok) {
      throw new ApiError(resp.status, ...(await errorParts(resp)));
    }
    return (await resp.json()) as HealthResponse;
  }
}

async function errorParts(resp: Response): Promise<[string, string | undefined]> {
  try {
    const body = (await resp.json()) as { error?: string; detail?: string };
    return [body.error ?? "server_error", body.detail];
  } catch {
    return ["server_error", undefined];
  }
}
