/**
 * Annotation app: fetch the next pair, render both tables side by side,
 * take a 0-10 rating, advance. All coordination (assignment, overwrite
 * semantics, progress) lives server-side; this stays a thin view.
 */

import { ApiClient, ApiError } from './api.js';
import { renderGrid, renderMissing, escapeHtml } from './grid-render.js';
import { HINT_REVEAL_DELAY_MS, renderHints } from './hints.js';
import { ALL_SCORES, isValidScore, scoreForKey } from './rating.js';
import { SubmissionQueue } from './queue.js';
import type { PairView } from './types.js';

interface Elements {
  annotatorInput: HTMLInputElement;
  startButton: HTMLButtonElement;
  pairTitle: HTMLElement;
  gtPanel: HTMLElement;
  extractedPanel: HTMLElement;
  hintsPanel: HTMLElement;
  hintsToggle: HTMLButtonElement;
  scoreBar: HTMLElement;
  status: HTMLElement;
  queueBadge: HTMLElement;
  remaining: HTMLElement;
  rawToggle: HTMLButtonElement;
}

export class AnnotationApp {
  private current: PairView | null = null;
  private annotator = '';
  private showRaw = false;
  private revealTimer: ReturnType<typeof setTimeout> | null = null;
  private queue: SubmissionQueue;

  constructor(
    private api: ApiClient,
    private el: Elements,
  ) {
    this.queue = new SubmissionQueue(api);
  }

  bind(): void {
    this.el.startButton.addEventListener('click', () => void this.start());
    this.el.rawToggle.addEventListener('click', () => this.toggleRaw());
    this.el.hintsToggle.addEventListener('click', () => this.revealHints());
    for (const score of ALL_SCORES) {
      const button = document.createElement('button');
      button.className = 'score-button';
      button.textContent = String(score);
      button.addEventListener('click', () => void this.rate(score));
      this.el.scoreBar.appendChild(button);
    }
    document.addEventListener('keydown', (event) => {
      if (event.target instanceof HTMLInputElement || event.target instanceof HTMLTextAreaElement) {
        return;
      }
      const score = scoreForKey(event.key, event.shiftKey);
      if (score !== null && this.current) {
        event.preventDefault();
        void this.rate(score);
      }
    });
  }

  private async start(): Promise<void> {
    this.annotator = this.el.annotatorInput.value.trim();
    if (!this.annotator) {
      this.setStatus('enter an annotator id first', 'error');
      return;
    }
    await this.advance();
  }

  private async advance(): Promise<void> {
    try {
      const next = await this.api.nextPair(this.annotator);
      this.el.remaining.textContent = `${next.remaining} unrated`;
      if (next.pair_id === null) {
        this.setStatus('no pairs in the store', 'error');
        return;
      }
      if (next.remaining === 0) {
        this.setStatus('all pairs rated: continuing lets you revise earlier ratings', 'info');
      }
      await this.load(next.pair_id);
    } catch (error) {
      this.setStatus(`cannot reach the server: ${String(error)}`, 'error');
    }
  }

  private async load(pairId: string): Promise<void> {
    const pair = await this.api.pair(pairId, this.annotator);
    this.current = pair;
    this.showRaw = false;
    this.renderCurrent();
    this.collapseHints();
    const existing = pair.existing_rating;
    this.setStatus(
      existing !== null ? `already rated ${existing}; a new score overwrites it` : 'rate this pair (0-9, Shift+0 for 10)',
      'info',
    );
  }

  private renderCurrent(): void {
    const pair = this.current;
    if (!pair) {
      return;
    }
    this.el.pairTitle.textContent = pair.pair_id;
    if (this.showRaw) {
      this.el.gtPanel.innerHTML = `<pre>${escapeHtml(pair.gt_latex)}</pre>`;
      this.el.extractedPanel.innerHTML =
        pair.extracted_text === null ? renderMissing() : `<pre>${escapeHtml(pair.extracted_text)}</pre>`;
    } else {
      this.el.gtPanel.innerHTML = pair.gt_grid ? renderGrid(pair.gt_grid) : `<pre>${escapeHtml(pair.gt_latex)}</pre>`;
      if (pair.extracted_text === null) {
        this.el.extractedPanel.innerHTML = renderMissing();
      } else if (pair.extracted_grid) {
        this.el.extractedPanel.innerHTML = renderGrid(pair.extracted_grid);
      } else {
        this.el.extractedPanel.innerHTML = `<pre>${escapeHtml(pair.extracted_text)}</pre>`;
      }
    }
    this.el.hintsPanel.innerHTML = renderHints(pair.hints);
  }

  private collapseHints(): void {
    this.el.hintsPanel.classList.add('collapsed');
    this.el.hintsToggle.textContent = 'show hints';
    if (this.revealTimer !== null) {
      clearTimeout(this.revealTimer);
    }
    this.revealTimer = setTimeout(() => this.revealHints(), HINT_REVEAL_DELAY_MS);
  }

  private revealHints(): void {
    this.el.hintsPanel.classList.remove('collapsed');
    this.el.hintsToggle.textContent = 'hints shown';
  }

  private toggleRaw(): void {
    this.showRaw = !this.showRaw;
    this.el.rawToggle.textContent = this.showRaw ? 'show rendered' : 'show raw source';
    this.renderCurrent();
  }

  private async rate(score: number): Promise<void> {
    const pair = this.current;
    if (!pair || !isValidScore(score)) {
      return;
    }
    try {
      const outcome = await this.queue.submit({
        pair_id: pair.pair_id,
        annotator_id: this.annotator,
        score,
      });
      if (outcome === 'queued') {
        this.setStatus(`offline: rating queued (${this.queue.size} pending)`, 'warn');
      }
    } catch (error) {
      if (error instanceof ApiError) {
        this.setStatus(`server rejected the rating: ${error.detail}`, 'error');
        return;
      }
      throw error;
    }
    this.updateQueueBadge();
    await this.advance();
  }

  private updateQueueBadge(): void {
    this.el.queueBadge.textContent = this.queue.size > 0 ? `${this.queue.size} queued` : '';
  }

  private setStatus(text: string, kind: 'info' | 'warn' | 'error'): void {
    this.el.status.textContent = text;
    this.el.status.className = `status status-${kind}`;
  }
}

export function mountApp(): void {
  const byId = (id: string) => {
    const element = document.getElementById(id);
    if (!element) {
      throw new Error(`missing element #${id}`);
    }
    return element;
  };
  const app = new AnnotationApp(new ApiClient(), {
    annotatorInput: byId('annotator') as HTMLInputElement,
    startButton: byId('start') as HTMLButtonElement,
    pairTitle: byId('pair-title'),
    gtPanel: byId('gt-panel'),
    extractedPanel: byId('extracted-panel'),
    hintsPanel: byId('hints-panel'),
    hintsToggle: byId('hints-toggle') as HTMLButtonElement,
    scoreBar: byId('score-bar'),
    status: byId('status'),
    queueBadge: byId('queue-badge'),
    remaining: byId('remaining'),
    rawToggle: byId('raw-toggle') as HTMLButtonElement,
  });
  app.bind();
}
