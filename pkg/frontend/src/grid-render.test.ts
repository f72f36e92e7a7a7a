import { describe, expect, it } from 'vitest';

import { escapeHtml, renderGrid, renderMissing, unescapeHtml } from './grid-render.js';
import type { GridJson } from './types.js';

const simpleGrid: GridJson = {
  n_rows: 2,
  n_cols: 2,
  cells: [
    { r: 0, c: 0, rs: 1, cs: 1, text: 'a', header: true },
    { r: 0, c: 1, rs: 1, cs: 1, text: 'b', header: true },
    { r: 1, c: 0, rs: 1, cs: 1, text: '1', header: false },
    { r: 1, c: 1, rs: 1, cs: 1, text: '2', header: false },
  ],
};

describe('renderGrid', () => {
  it('renders one tr per row with header tags', () => {
    const html = renderGrid(simpleGrid);
    expect(html.match(/<tr>/g)).toHaveLength(2);
    expect(html).toContain('<th>a</th>');
    expect(html).toContain('<td>1</td>');
  });

  it('emits span attributes only when above 1', () => {
    const grid: GridJson = {
      n_rows: 2,
      n_cols: 2,
      cells: [
        { r: 0, c: 0, rs: 1, cs: 2, text: 'wide', header: false },
        { r: 1, c: 0, rs: 1, cs: 1, text: 'x', header: false },
        { r: 1, c: 1, rs: 1, cs: 1, text: 'y', header: false },
      ],
    };
    const html = renderGrid(grid);
    expect(html).toContain('<td colspan="2">wide</td>');
    expect(html).not.toContain('rowspan');
  });

  it('orders cells by anchor within a row', () => {
    const grid: GridJson = {
      n_rows: 1,
      n_cols: 3,
      cells: [
        { r: 0, c: 2, rs: 1, cs: 1, text: 'z', header: false },
        { r: 0, c: 0, rs: 1, cs: 1, text: 'x', header: false },
        { r: 0, c: 1, rs: 1, cs: 1, text: 'y', header: false },
      ],
    };
    const html = renderGrid(grid);
    expect(html.indexOf('>x<')).toBeLessThan(html.indexOf('>y<'));
    expect(html.indexOf('>y<')).toBeLessThan(html.indexOf('>z<'));
  });

  it('never alters cell content: escape round-trips byte-for-byte', () => {
    const nasty = ['<td>&amp;</td>', 'a "quoted" \\textbf{x}', 'α ≤ β', '  spaces  kept  '];
    for (const text of nasty) {
      expect(unescapeHtml(escapeHtml(text))).toBe(text);
      const grid: GridJson = {
        n_rows: 1,
        n_cols: 1,
        cells: [{ r: 0, c: 0, rs: 1, cs: 1, text, header: false }],
      };
      const html = renderGrid(grid);
      const inner = html.replace(/^.*<td>/, '').replace(/<\/td>.*$/, '');
      expect(unescapeHtml(inner)).toBe(text);
    }
  });

  it('escapes markup instead of injecting it', () => {
    const grid: GridJson = {
      n_rows: 1,
      n_cols: 1,
      cells: [{ r: 0, c: 0, rs: 1, cs: 1, text: '<script>alert(1)</script>', header: false }],
    };
    expect(renderGrid(grid)).not.toContain('<script>');
  });
});

describe('renderMissing', () => {
  it('announces the miss while keeping rating possible (no controls removed)', () => {
    expect(renderMissing()).toContain('parser missed this table');
  });
});
