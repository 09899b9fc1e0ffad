/** Thin typed client for the scenario-analysis HTTP API.
 *
 * The fetch implementation is injectable so tests can intercept every
 * request and assert that the UI never invents numbers of its own.
 */

import type { NetworkListing, PlanPayload, PosteriorPayload } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiRequestError> {
  let code = "http_error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: { code?: string; message?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiRequestError(code, message, response.status);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  network(): Promise<NetworkListing> {
    return this.get<NetworkListing>("/api/network");
  }

  posteriors(evidence: Record<string, string>): Promise<PosteriorPayload> {
    return this.post<PosteriorPayload>("/api/posteriors", { evidence });
  }

  optimize(
    target: { node: string; state: string },
    weights: [number, number, number],
  ): Promise<PlanPayload> {
    return this.post<PlanPayload>("/api/optimize", { target, weights });
  }
}
