// Thin fetch client. No transformation of payloads: the engine's numbers
// are handed to the views exactly as received.

import type {
  Category,
  FieldPayload,
  GraphPayload,
  MemberDetail,
  MembersPayload,
  Recommendation,
  RecommendationRequest,
  TracePayload,
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

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json();
    if (!response.ok) {
      const code = body?.error?.code ?? "unknown";
      const message = body?.error?.message ?? response.statusText;
      throw new ApiError(code, message, response.status);
    }
    return body as T;
  }

  members(): Promise<MembersPayload> {
    return this.request("/members");
  }

  member(id: number): Promise<MemberDetail> {
    return this.request(`/members/${id}`);
  }

  categories(): Promise<{ categories: Category[] }> {
    return this.request("/categories");
  }

  graph(): Promise<GraphPayload> {
    return this.request("/graph");
  }

  recommend(body: RecommendationRequest): Promise<Recommendation> {
    return this.request("/recommendations", {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  trace(queryId: string): Promise<TracePayload> {
    return this.request(`/queries/${encodeURIComponent(queryId)}`);
  }

  field(body: {
    query_id: string;
    hip: number[];
    grid: { min: number[]; max: number[]; shape: number[] };
  }): Promise<FieldPayload> {
    return this.request("/field", { method: "POST", body: JSON.stringify(body) });
  }

  submitRatings(
    ratings: { rater: number; subject: number; category: string; value: number }[],
  ): Promise<{ tick: number; trust_updates: number }> {
    return this.request("/ratings", {
      method: "POST",
      body: JSON.stringify({ ratings }),
    });
  }
}
