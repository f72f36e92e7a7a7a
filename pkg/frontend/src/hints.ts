/**
 * Hint presentation: category badges and the initial collapse.
 *
 * Hints arrive server-ordered with content errors first. They stay
 * collapsed for the first seconds of a pair so raters form their own
 * impression before reading machine-generated pointers.
 */

import type { Hint } from './types.js';
import { escapeHtml } from './grid-render.js';

export const HINT_REVEAL_DELAY_MS = 3000;

const CATEGORY_CLASS: Record<string, string> = {
  'content error': 'hint-content-error',
  'structural reorganization': 'hint-structural',
  'value equivalence': 'hint-equivalence',
  'symbol encoding': 'hint-encoding',
  'markup artifact': 'hint-markup',
};

export function hintClass(category: string): string {
  return CATEGORY_CLASS[category] ?? 'hint-other';
}

export function renderHints(hints: Hint[]): string {
  if (hints.length === 0) {
    return '<p class="no-hints">no hints for this pair</p>';
  }
  const items = hints
    .map(
      (h) =>
        `<li class="hint ${hintClass(h.category)}">` +
        `<span class="hint-badge">${escapeHtml(h.category)}</span> ` +
        `${escapeHtml(h.text)}</li>`,
    )
    .join('');
  return `<ul class="hint-list">${items}</ul>`;
}
