import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from './api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('fetches the next pair', async () => {
    const calls: string[] = [];
    const api = new ApiClient('', async (input) => {
      calls.push(input);
      return jsonResponse(200, { pair_id: 'p/x/t0', remaining: 3 });
    });
    const next = await api.nextPair('ann one');
    expect(next.pair_id).toBe('p/x/t0');
    expect(calls[0]).toBe('/api/pairs/next?annotator=ann%20one');
  });

  it('posts ratings as JSON', async () => {
    let seenBody = '';
    const api = new ApiClient('', async (_input, init) => {
      seenBody = String(init?.body);
      return jsonResponse(200, { status: 'ok', overwrote: false });
    });
    await api.submitRating({ pair_id: 'p', annotator_id: 'a', score: 7 });
    expect(JSON.parse(seenBody)).toEqual({ pair_id: 'p', annotator_id: 'a', score: 7 });
  });

  it('surfaces server rejections as ApiError with the detail', async () => {
    const api = new ApiClient('', async () => jsonResponse(400, { detail: 'score out of range' }));
    await expect(api.submitRating({ pair_id: 'p', annotator_id: 'a', score: 11 })).rejects.toThrowError(
      ApiError,
    );
    try {
      await api.submitRating({ pair_id: 'p', annotator_id: 'a', score: 11 });
    } catch (error) {
      expect((error as ApiError).status).toBe(400);
      expect((error as ApiError).detail).toContain('score out of range');
    }
  });

  it('requests pair payloads with the annotator for existing ratings', async () => {
    const calls: string[] = [];
    const api = new ApiClient('', async (input) => {
      calls.push(input);
      return jsonResponse(200, {
        pair_id: 'p',
        gt_latex: 'x',
        gt_grid: null,
        extracted_text: null,
        extracted_format: null,
        extracted_grid: null,
        hints: [],
        existing_rating: 5,
      });
    });
    const pair = await api.pair('p', 'me');
    expect(pair.existing_rating).toBe(5);
    expect(calls[0]).toBe('/api/pairs/p?annotator=me');
  });
});
