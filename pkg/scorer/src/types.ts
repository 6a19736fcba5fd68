/**
 * Shared types for the bank scorer.
 *
 * The scorer walks an instance bank (category directories holding sequence
 * directories with `crops/*.png`), scores every crop against its category
 * prompt, and writes one `scores.txt` sidecar per sequence in the exact
 * format the composition engine's bank loader parses.
 */

/** Decoded crop pixels, RGBA row-major. */
export interface CropImage {
  width: number;
  height: number;
  /** RGBA bytes, length = width * height * 4. */
  pixels: Uint8Array;
}

/** One sequence discovered in the bank layout. */
export interface SequenceRef {
  categoryId: number;
  sequenceId: string;
  /** Absolute path of the sequence directory. */
  dir: string;
  /** Crop files in frame order. */
  cropPaths: string[];
  /** Where the sidecar lives (may not exist yet). */
  scoresPath: string;
}

/** A scoring model: maps crops + prompt to relevance scores in [0, 1]. */
export interface ScoreModel {
  /** Stable identifier recorded in the summary. */
  readonly id: string;
  scoreBatch(crops: CropImage[], prompt: string): Promise<number[]>;
}

/** Per-category slice of the run summary. */
export interface CategorySummary {
  sequences: number;
  frames: number;
  min: number;
  max: number;
  mean: number;
  /** Frame counts over [0,1] split into 10 equal bins; sums to `frames`. */
  histogram: number[];
}

export interface ScoreSummary {
  model: string;
  totals: {
    categories: number;
    sequences: number;
    frames: number;
  };
  categories: Record<string, CategorySummary>;
}

export type ScorerErrorKind = "validation" | "io";

/** Error with an exit-code category: validation -> 2, io -> 3. */
export class ScorerError extends Error {
  readonly kind: ScorerErrorKind;

  constructor(kind: ScorerErrorKind, message: string) {
    super(message);
    this.name = "ScorerError";
    this.kind = kind;
  }
}
