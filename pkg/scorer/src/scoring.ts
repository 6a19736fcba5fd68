import { existsSync, readFileSync } from "node:fs";
import { join } from "node:path";
import { discoverBank } from "./bank.js";
import { readCrop } from "./png.js";
import { buildPrompt } from "./prompts.js";
import { formatScores, parseScores, writeFileAtomic } from "./sidecar.js";
import {
  CategorySummary,
  ScoreModel,
  ScoreSummary,
  SequenceRef,
  ScorerError,
} from "./types.js";

export const SUMMARY_FILENAME = "score_summary.json";
const CATEGORY_NAMES_FILENAME = "categories.json";
const HISTOGRAM_BINS = 10;

export interface ScoreBankOptions {
  batchSize?: number;
  workers?: number;
  /** Rescore sequences that already have a sidecar. */
  force?: boolean;
}

export interface ScoreBankResult {
  summary: ScoreSummary;
  /** Files created or rewritten by this run (sidecars and maybe summary). */
  written: string[];
  /** How many sidecar files this run wrote; 0 on a no-op rerun. */
  sidecarsWritten: number;
}

/**
 * Score one sequence's crops against its prompt, in frame order.
 * Scores are clipped into [0, 1]; the clip is monotone in the raw value.
 */
export async function scoreSequence(
  seq: SequenceRef,
  model: ScoreModel,
  prompt: string,
  batchSize: number,
): Promise<number[]> {
  const crops = seq.cropPaths.map((path) => readCrop(path));
  const scores: number[] = [];
  for (let start = 0; start < crops.length; start += batchSize) {
    const batch = crops.slice(start, start + batchSize);
    const raw = await model.scoreBatch(batch, prompt);
    if (raw.length !== batch.length) {
      throw new ScorerError(
        "validation",
        `model returned ${raw.length} scores for ${batch.length} crops ` +
          `in ${seq.dir}`,
      );
    }
    for (const value of raw) {
      scores.push(Math.min(1, Math.max(0, value)));
    }
  }
  return scores;
}

/**
 * Category id -> display name used in prompts.
 *
 * The bank layout only has integer ids, so names come from an optional
 * categories.json at the bank root ({"1": "bear", ...}); ids without an
 * entry fall back to "category-<id>".
 */
export function categoryName(
  bankRoot: string,
  categoryId: number,
  cache: Map<number, string>,
): string {
  if (cache.size === 0) {
    const path = join(bankRoot, CATEGORY_NAMES_FILENAME);
    if (existsSync(path)) {
      let doc: unknown;
      try {
        doc = JSON.parse(readFileSync(path, "utf8"));
      } catch {
        throw new ScorerError("validation", `malformed JSON: ${path}`);
      }
      if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
        throw new ScorerError("validation", `${path} must map ids to names`);
      }
      for (const [key, value] of Object.entries(doc)) {
        if (!/^\d+$/.test(key) || typeof value !== "string") {
          throw new ScorerError("validation", `${path} must map ids to names`);
        }
        cache.set(Number(key), value);
      }
    }
    cache.set(-1, ""); // sentinel: file has been read
  }
  return cache.get(categoryId) ?? `category-${categoryId}`;
}

/**
 * Score every sequence in the bank and write sidecars plus a summary.
 *
 * Sequences that already have scores.txt are skipped unless `force`; the
 * summary always covers the whole bank (existing sidecars are re-read), so
 * its histogram sums to the bank's total frame count. Per-sequence tasks
 * run `workers` at a time; each sidecar is written atomically, so a failed
 * run never leaves a truncated file and a rerun picks up the remainder.
 */
export async function scoreBank(
  bankRoot: string,
  model: ScoreModel,
  options: ScoreBankOptions = {},
): Promise<ScoreBankResult> {
  const batchSize = options.batchSize ?? 8;
  const workers = options.workers ?? 1;
  if (batchSize < 1) {
    throw new ScorerError("validation", `batch size must be >= 1, got ${batchSize}`);
  }
  if (workers < 1) {
    throw new ScorerError("validation", `workers must be >= 1, got ${workers}`);
  }

  const sequences = discoverBank(bankRoot);
  const names = new Map<number, string>();
  const targets = sequences.filter(
    (seq) => options.force || !existsSync(seq.scoresPath),
  );

  const written: string[] = [];
  const failures: string[] = [];
  let cursor = 0;
  const runWorker = async (): Promise<void> => {
    while (true) {
      const index = cursor++;
      if (index >= targets.length) return;
      const seq = targets[index]!;
      const prompt = buildPrompt(categoryName(bankRoot, seq.categoryId, names));
      try {
        const scores = await scoreSequence(seq, model, prompt, batchSize);
        writeFileAtomic(seq.scoresPath, formatScores(scores));
        written.push(seq.scoresPath);
      } catch (err) {
        const detail = err instanceof Error ? err.message : String(err);
        failures.push(`${seq.categoryId}/${seq.sequenceId}: ${detail}`);
      }
    }
  };
  await Promise.all(
    Array.from({ length: Math.min(workers, targets.length || 1) }, runWorker),
  );
  if (failures.length > 0) {
    throw new ScorerError(
      "io",
      `scoring failed for ${failures.length} sequence(s):\n  ` +
        failures.sort().join("\n  "),
    );
  }

  const sidecarsWritten = written.length;
  const summary = buildSummary(model.id, sequences);
  const summaryPath = join(bankRoot, SUMMARY_FILENAME);
  const payload = JSON.stringify(summary, null, 2) + "\n";
  // Skip the write when nothing changed so a rerun is a true no-op.
  const previous = existsSync(summaryPath)
    ? readFileSync(summaryPath, "utf8")
    : null;
  if (previous !== payload) {
    writeFileAtomic(summaryPath, payload);
    written.push(summaryPath);
  }
  return { summary, written: written.sort(), sidecarsWritten };
}

function buildSummary(modelId: string, sequences: SequenceRef[]): ScoreSummary {
  const perCategory = new Map<number, number[]>();
  for (const seq of sequences) {
    const scores = parseScores(readFileSync(seq.scoresPath, "utf8"));
    if (scores.length !== seq.cropPaths.length) {
      throw new ScorerError(
        "validation",
        `${seq.scoresPath} has ${scores.length} lines for ` +
          `${seq.cropPaths.length} crops`,
      );
    }
    const bucket = perCategory.get(seq.categoryId) ?? [];
    bucket.push(...scores);
    perCategory.set(seq.categoryId, bucket);
  }

  const categories: Record<string, CategorySummary> = {};
  for (const categoryId of [...perCategory.keys()].sort((a, b) => a - b)) {
    const values = perCategory.get(categoryId)!;
    const histogram = new Array<number>(HISTOGRAM_BINS).fill(0);
    for (const value of values) {
      const bin = Math.min(Math.floor(value * HISTOGRAM_BINS), HISTOGRAM_BINS - 1);
      histogram[bin]! += 1;
    }
    const mean = values.reduce((acc, v) => acc + v, 0) / values.length;
    categories[String(categoryId)] = {
      sequences: sequences.filter((s) => s.categoryId === categoryId).length,
      frames: values.length,
      min: Math.min(...values),
      max: Math.max(...values),
      mean: Number(mean.toFixed(6)),
      histogram,
    };
  }

  return {
    model: modelId,
    totals: {
      categories: perCategory.size,
      sequences: sequences.length,
      frames: sequences.reduce((acc, s) => acc + s.cropPaths.length, 0),
    },
    categories,
  };
}
