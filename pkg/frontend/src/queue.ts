/**
 * Offline submission queue: ratings that fail with a network error are
 * held and flushed in order once the server is reachable again.
 *
 * Server-side rejections (4xx) are NOT queued; retrying an invalid
 * submission would never succeed, so those surface to the caller.
 */

import { ApiClient, ApiError } from './api.js';
import type { RatingSubmission } from './types.js';

export class SubmissionQueue {
  private pending: RatingSubmission[] = [];

  constructor(private api: ApiClient) {}

  get size(): number {
    return this.pending.length;
  }

  /**
   * Submit now if possible. Returns 'sent' on success, 'queued' when the
   * network is down. Server rejections propagate as ApiError.
   */
  async submit(rating: RatingSubmission): Promise<'sent' | 'queued'> {
    // keep ordering: earlier queued ratings go out first
    if (this.pending.length > 0) {
      const flushed = await this.flush();
      if (!flushed) {
        this.pending.push(rating);
        return 'queued';
      }
    }
    try {
      await this.api.submitRating(rating);
      return 'sent';
    } catch (error) {
      if (error instanceof ApiError) {
        throw error;
      }
      this.pending.push(rating);
      return 'queued';
    }
  }

  /** Try to drain the queue; returns true when it is empty afterwards. */
  async flush(): Promise<boolean> {
    while (this.pending.length > 0) {
      const head = this.pending[0];
      try {
        await this.api.submitRating(head);
      } catch (error) {
        if (error instanceof ApiError) {
          // the server saw it and said no: drop it, surfacing would need UI state
          this.pending.shift();
          continue;
        }
        return false; // still offline
      }
      this.pending.shift();
    }
    return true;
  }
}
