/**
 * Score handling: the 0-10 scale, keyboard mapping and validation.
 */

export const MIN_SCORE = 0;
export const MAX_SCORE = 10;

/** Every score the UI can emit; controls are generated from this list. */
export const ALL_SCORES: readonly number[] = Object.freeze(
  Array.from({ length: MAX_SCORE - MIN_SCORE + 1 }, (_, i) => MIN_SCORE + i),
);

export function isValidScore(value: unknown): value is number {
  return typeof value === 'number' && Number.isInteger(value) && value >= MIN_SCORE && value <= MAX_SCORE;
}

/**
 * Map a keyboard event to a score: digits 0-9 directly, Shift+0 for 10.
 * Returns null for keys that are not score shortcuts.
 */
export function scoreForKey(key: string, shiftKey: boolean): number | null {
  if (shiftKey && (key === '0' || key === ')')) {
    return 10; // Shift+0 produces ')' on most layouts; accept both
  }
  if (!shiftKey && key.length === 1 && key >= '0' && key <= '9') {
    return key.charCodeAt(0) - '0'.charCodeAt(0);
  }
  return null;
}
