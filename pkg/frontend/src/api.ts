// Wire types and fetch helpers for the kgqa HTTP API.

export type QaStatus = "answered" | "no_answer" | "multi_entity";
export type AnswerSource = "subgraph" | "fallback";

export interface AskResponse {
  status: QaStatus;
  answer: string | null;
  entity: string | null;
  predicate: string | null;
  score: number | null;
  latency_ms: number;
  source: AnswerSource;
}

export interface MetricsBucket {
  le_ms: number | null;
  count: number;
}

export interface MetricsSnapshot {
  answered: number;
  no_answer: number;
  multi_entity: number;
  fallback_answered: number;
  total: number;
  latency_histogram: MetricsBucket[];
  latency_p50_ms: number | null;
}

export interface HealthResponse {
  status: string;
  entities: number;
}

export class ApiError extends Error {
  constructor(public readonly httpStatus: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

function stripTrailingSlashes(url: string): string {
  return url.replace(/\/+$/, "");
}

/** Base URL from the page's ?api= query parameter, "" for same-origin. */
export function baseUrlFromQuery(search: string): string {
  const params = new URLSearchParams(search);
  return stripTrailingSlashes(params.get("api") ?? "");
}

/** Query parameter first, then an optional config.json, then same-origin. */
export async function resolveBaseUrl(search: string): Promise<string> {
  const fromQuery = baseUrlFromQuery(search);
  if (fromQuery !== "") {
    return fromQuery;
  }
  try {
    const resp = await fetch("config.json");
    if (resp.ok) {
      const config = (await resp.json()) as { api?: unknown };
      if (typeof config.api === "string") {
        return stripTrailingSlashes(config.api);
      }
    }
  } catch {
    // no config file served; same-origin is the default
  }
  return "";
}

export async function askQuestion(
  baseUrl: string,
  question: string,
): Promise<AskResponse> {
  const resp = await fetch(baseUrl + "/ask", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ question }),
  });
  if (!resp.ok) {
    throw new ApiError(resp.status, `ask failed with HTTP ${resp.status}`);
  }
  return (await resp.json()) as AskResponse;
}

export async function fetchMetrics(baseUrl: string): Promise<MetricsSnapshot> {
  const resp = await fetch(baseUrl + "/metrics");
  if (!resp.ok) {
    throw new ApiError(resp.status, `metrics failed with HTTP ${resp.status}`);
  }
  return (await resp.json()) as MetricsSnapshot;
}

export async function fetchHealth(baseUrl: string): Promise<HealthResponse> {
  const resp = await fetch(baseUrl + "/healthz");
  if (!resp.ok) {
    throw new ApiError(resp.status, `healthz failed with HTTP ${resp.status}`);
  }
  return (await resp.json()) as HealthResponse;
}
