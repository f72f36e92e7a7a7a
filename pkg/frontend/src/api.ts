/**
 * Thin client for the annotation endpoints. The fetch function is
 * injectable so tests can drive every network path without a server.
 */

import type { NextPair, PairView, Progress, RatingSubmission } from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = typeof body.detail === 'string' ? body.detail : JSON.stringify(body.detail);
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  nextPair(annotator: string): Promise<NextPair> {
    return this.request<NextPair>(`/api/pairs/next?annotator=${encodeURIComponent(annotator)}`);
  }

  pair(pairId: string, annotator?: string): Promise<PairView> {
    const query = annotator ? `?annotator=${encodeURIComponent(annotator)}` : '';
    return this.request<PairView>(`/api/pairs/${pairId}${query}`);
  }

  submitRating(rating: RatingSubmission): Promise<{ status: string; overwrote: boolean }> {
    return this.request(`/api/ratings`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(rating),
    });
  }

  progress(): Promise<Progress> {
    return this.request<Progress>(`/api/progress`);
  }
}
