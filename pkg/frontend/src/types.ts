/**
 * Payload shapes of the annotation API (mirrors the server's pydantic models).
 */

export interface GridCell {
  r: number;
  c: number;
  rs: number;
  cs: number;
  text: string;
  header: boolean;
}

export interface GridJson {
  n_rows: number;
  n_cols: number;
  cells: GridCell[];
}

export interface Hint {
  category: string;
  text: string;
}

export interface PairView {
  pair_id: string;
  gt_latex: string;
  gt_grid: GridJson | null;
  extracted_text: string | null;
  extracted_format: string | null;
  extracted_grid: GridJson | null;
  hints: Hint[];
  existing_rating: number | null;
}

export interface NextPair {
  pair_id: string | null;
  remaining: number;
}

export interface RatingSubmission {
  pair_id: string;
  annotator_id: string;
  score: number;
}

export interface Progress {
  pairs: number;
  total_ratings: number;
  by_annotator: Record<string, number>;
}

export const HINT_CATEGORIES = [
  'content error',
  'structural reorganization',
  'value equivalence',
  'symbol encoding',
  'markup artifact',
] as const;
