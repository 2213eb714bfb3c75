import { API_BASE, COOCCURRING_LIMIT, SEARCH_LIMIT } from "./config.js";
import type {
  ClusterDetail,
  ClusterPage,
  CooccurringPage,
  KeywordDetail,
  KeywordSummary,
  Page,
  StrategicPayload,
  TrendPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

// One in-flight request per URL: callers issued while an identical request
// is pending share its promise instead of hitting the network again.
const inflight = new Map<string, Promise<unknown>>();

async function request<T>(path: string): Promise<T> {
  const pending = inflight.get(path);
  if (pending) {
    return pending as Promise<T>;
  }
  const promise = (async () => {
    try {
      const resp = await fetch(path, { headers: { accept: "application/json" } });
      const body = await resp.json().catch(() => null);
      if (!resp.ok) {
        const detail =
          body && typeof body === "object" && "error" in body
            ? (body as { error: { message: string } }).error.message
            : `request failed with status ${resp.status}`;
        throw new ApiError(resp.status, detail);
      }
      return body as T;
    } finally {
      inflight.delete(path);
    }
  })();
  inflight.set(path, promise);
  return promise;
}

/** Escape a keyword for use inside a URL path, keeping "/" literal:
 * the API routes keywords with embedded slashes as-is. */
export function encodeKeyword(keyword: string): string {
  return keyword.split("/").map(encodeURIComponent).join("/");
}

export const api = {
  searchKeywords(query: string): Promise<Page<KeywordSummary>> {
    const q = encodeURIComponent(query);
    return request(`${API_BASE}/keywords?q=${q}&limit=${SEARCH_LIMIT}`);
  },
  keywordDetail(keyword: string): Promise<KeywordDetail> {
    return request(`${API_BASE}/keywords/${encodeKeyword(keyword)}`);
  },
  keywordTrend(keyword: string): Promise<TrendPayload> {
    return request(`${API_BASE}/keywords/${encodeKeyword(keyword)}/trend`);
  },
  cooccurring(keyword: string): Promise<CooccurringPage> {
    return request(
      `${API_BASE}/keywords/${encodeKeyword(keyword)}/cooccurring?limit=${COOCCURRING_LIMIT}`,
    );
  },
  clusters(): Promise<ClusterPage> {
    return request(`${API_BASE}/clusters`);
  },
  cluster(id: number): Promise<ClusterDetail> {
    return request(`${API_BASE}/clusters/${id}`);
  },
  strategic(): Promise<StrategicPayload> {
    return request(`${API_BASE}/strategic`);
  },
};
