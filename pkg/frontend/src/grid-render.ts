/**
 * Span-faithful HTML rendering of the canonical grid JSON.
 *
 * Tables are always rebuilt from the grid model, never from parser
 * markup: that prevents markup injection and guarantees the displayed
 * cell text is byte-for-byte the payload text (escaping only changes
 * the HTML encoding, not the rendered characters).
 */

import type { GridJson } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Inverse of escapeHtml, used by tests to prove content is unaltered. */
export function unescapeHtml(text: string): string {
  return text
    .replace(/&quot;/g, '"')
    .replace(/&gt;/g, '>')
    .replace(/&lt;/g, '<')
    .replace(/&amp;/g, '&');
}

/**
 * Build the table markup for a grid. Cells are emitted at their anchor
 * position in row order with rowspan/colspan attributes, exactly like
 * the model's occupancy semantics.
 */
export function renderGrid(grid: GridJson): string {
  const byRow: string[][] = Array.from({ length: grid.n_rows }, () => []);
  const sorted = [...grid.cells].sort((a, b) => a.r - b.r || a.c - b.c);
  for (const cell of sorted) {
    const tag = cell.header ? 'th' : 'td';
    const rs = cell.rs > 1 ? ` rowspan="${cell.rs}"` : '';
    const cs = cell.cs > 1 ? ` colspan="${cell.cs}"` : '';
    byRow[cell.r].push(`<${tag}${rs}${cs}>${escapeHtml(cell.text)}</${tag}>`);
  }
  const rows = byRow.map((cells) => `<tr>${cells.join('')}</tr>`).join('');
  return `<table class="grid-table">${rows}</table>`;
}

/** Placeholder markup for a table the parser did not emit at all. */
export function renderMissing(): string {
  return '<div class="missing-table">parser missed this table</div>';
}
