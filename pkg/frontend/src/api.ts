/** Thin client for the /api endpoints with in-flight request dedup. */

import type {
  SearchParams,
  SearchResponse,
  SlideResponse,
  VersionsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

type Fetcher = (url: string) => Promise<Response>;

const inflight = new Map<string, Promise<unknown>>();

let fetcher: Fetcher = (url) => fetch(url);
let baseUrl = "";

/** Tests and embedders can swap the transport and API origin. */
export function configureApi(options: { fetcher?: Fetcher; baseUrl?: string }): void {
  if (options.fetcher) fetcher = options.fetcher;
  if (options.baseUrl !== undefined) baseUrl = options.baseUrl;
}

async function getJson<T>(path: string, params: Record<string, string>): Promise<T> {
  const qs = new URLSearchParams(params).toString();
  const url = baseUrl + path + (qs ? `?${qs}` : "");
  const existing = inflight.get(url);
  if (existing) return existing as Promise<T>;

  const request = (async () => {
    const response = await fetcher(url);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      // non-JSON error bodies fall through to the generic error below
    }
    if (!response.ok) {
      const err = (body as { error?: { code?: string; message?: string } })?.error;
      throw new ApiError(
        err?.code ?? "RequestFailed",
        err?.message ?? `request failed with status ${response.status}`,
        response.status,
      );
    }
    return body as T;
  })().finally(() => inflight.delete(url));

  inflight.set(url, request);
  return request as Promise<T>;
}

export function searchChanges(params: SearchParams): Promise<SearchResponse> {
  const query: Record<string, string> = {
    type: params.type,
    q: params.q,
    partial: String(params.partial),
  };
  if (params.from) query.from = params.from;
  if (params.to) query.to = params.to;
  if (params.domain) query.domain = params.domain;
  if (params.page) query.page = String(params.page);
  return getJson<SearchResponse>("/api/search", query);
}

export function getVersions(url: string): Promise<VersionsResponse> {
  return getJson<VersionsResponse>("/api/versions", { url });
}

export function getSlide(url: string, index: number): Promise<SlideResponse> {
  return getJson<SlideResponse>("/api/slide", { url, i: String(index) });
}

export function animateUrl(url: string, t1: string, t2: string): string {
  const qs = new URLSearchParams({ url, t1, t2 });
  return `${baseUrl}/api/animate?${qs}`;
}
