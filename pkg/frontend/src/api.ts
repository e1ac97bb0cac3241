import type { UIQueryState } from "./state";
import { toRequestBody, toSearchParams } from "./state";
import type { NodeInfo, SearchResponse } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string
  ) {
    super(`${code}: ${detail}`);
  }
}

/**
 * Thin /search client with latest-wins semantics: issuing a new query
 * aborts the in-flight one, so stale responses can never overwrite
 * fresh results.
 */
export class SearchClient {
  private inflight: AbortController | null = null;

  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch
  ) {}

  mediaUrl(mediaId: number): string {
    return `${this.baseUrl}/media/${mediaId}`;
  }

  async info(): Promise<NodeInfo> {
    const resp = await this.fetchFn(`${this.baseUrl}/info`);
    return (await resp.json()) as NodeInfo;
  }

  async search(state: UIQueryState): Promise<SearchResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;

    const init: RequestInit = { signal: controller.signal };
    let url = `${this.baseUrl}/search`;
    if (state.exemplar) {
      init.method = "POST";
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(toRequestBody(state));
    } else {
      url += `?${toSearchParams(state).toString()}`;
    }

    const resp = await this.fetchFn(url, init);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.error ?? "error", body.detail ?? "");
    }
    return body as SearchResponse;
  }
}
