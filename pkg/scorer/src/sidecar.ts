import { renameSync, writeFileSync } from "node:fs";
import { ScorerError } from "./types.js";

export const SCORE_DECIMALS = 6;

/** One score per line, 6 decimal places, trailing newline per line. */
export function formatScores(scores: number[]): string {
  return scores.map((s) => s.toFixed(SCORE_DECIMALS) + "\n").join("");
}

/** Parse a sidecar back into numbers; rejects malformed lines. */
export function parseScores(text: string): number[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  return lines.map((line) => {
    const value = Number(line);
    if (!Number.isFinite(value)) {
      throw new ScorerError("validation", `malformed score line: ${line!}`);
    }
    return value;
  });
}

/** Write via temp-and-rename so readers never observe a partial file. */
export function writeFileAtomic(path: string, content: string): void {
  const tmp = `${path}.tmp-${process.pid}`;
  writeFileSync(tmp, content, "utf8");
  renameSync(tmp, path);
}
