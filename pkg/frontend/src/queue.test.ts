import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from './api.js';
import { SubmissionQueue } from './queue.js';
import type { RatingSubmission } from './types.js';

function rating(score: number): RatingSubmission {
  return { pair_id: `p${score}`, annotator_id: 'a', score };
}

function makeApi(state: { online: boolean; received: RatingSubmission[] }): ApiClient {
  return new ApiClient('', async (_input, init) => {
    if (!state.online) {
      throw new TypeError('fetch failed'); // what fetch throws offline
    }
    state.received.push(JSON.parse(String(init?.body)));
    return new Response(JSON.stringify({ status: 'ok', overwrote: false }), { status: 200 });
  });
}

describe('SubmissionQueue', () => {
  it('sends directly when online', async () => {
    const state = { online: true, received: [] as RatingSubmission[] };
    const queue = new SubmissionQueue(makeApi(state));
    expect(await queue.submit(rating(7))).toBe('sent');
    expect(queue.size).toBe(0);
    expect(state.received).toHaveLength(1);
  });

  it('queues while offline and flushes in order when back', async () => {
    const state = { online: false, received: [] as RatingSubmission[] };
    const queue = new SubmissionQueue(makeApi(state));
    expect(await queue.submit(rating(1))).toBe('queued');
    expect(await queue.submit(rating(2))).toBe('queued');
    expect(queue.size).toBe(2);

    state.online = true;
    expect(await queue.flush()).toBe(true);
    expect(queue.size).toBe(0);
    expect(state.received.map((r) => r.score)).toEqual([1, 2]);
  });

  it('drains the backlog before a new submission', async () => {
    const state = { online: false, received: [] as RatingSubmission[] };
    const queue = new SubmissionQueue(makeApi(state));
    await queue.submit(rating(1));
    state.online = true;
    expect(await queue.submit(rating(2))).toBe('sent');
    expect(state.received.map((r) => r.score)).toEqual([1, 2]);
  });

  it('does not queue server rejections', async () => {
    const api = new ApiClient('', async () =>
      new Response(JSON.stringify({ detail: 'nope' }), { status: 400 }),
    );
    const queue = new SubmissionQueue(api);
    await expect(queue.submit(rating(11))).rejects.toThrowError(ApiError);
    expect(queue.size).toBe(0);
  });
});
