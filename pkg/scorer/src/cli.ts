#!/usr/bin/env node
/**
 * score-bank: write relevance-score sidecars for an instance bank.
 *
 * Exit codes mirror the composition engine's CLI: 0 success, 2 validation
 * error, 3 I/O error.
 */

import { parseArgs } from "node:util";
import { HttpScoreModel } from "./httpModel.js";
import { MockColorModel } from "./mockModel.js";
import { scoreBank } from "./scoring.js";
import { ScoreModel, ScorerError } from "./types.js";

const USAGE =
  "usage: score-bank --bank PATH [--model ID] [--endpoint URL] " +
  "[--batch-size N] [--workers K] [--force]";

function buildModel(modelId: string, endpoint?: string): ScoreModel {
  if (modelId === "mock-color") {
    return new MockColorModel();
  }
  if (!endpoint) {
    throw new ScorerError(
      "validation",
      `model ${modelId} needs --endpoint (only mock-color runs offline)`,
    );
  }
  return new HttpScoreModel({ endpoint, modelId });
}

function parsePositiveInt(raw: string | undefined, flag: string, fallback: number): number {
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isInteger(value) || value < 1) {
    throw new ScorerError("validation", `${flag} must be a positive integer, got ${raw}`);
  }
  return value;
}

export async function main(argv: string[]): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        bank: { type: "string" },
        model: { type: "string", default: "mock-color" },
        endpoint: { type: "string" },
        "batch-size": { type: "string" },
        workers: { type: "string" },
        force: { type: "boolean", default: false },
        help: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    console.error(`error: ${detail}\n${USAGE}`);
    return 2;
  }

  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }

  try {
    if (!parsed.values.bank) {
      throw new ScorerError("validation", `--bank is required\n${USAGE}`);
    }
    const model = buildModel(parsed.values.model!, parsed.values.endpoint);
    const result = await scoreBank(parsed.values.bank, model, {
      batchSize: parsePositiveInt(parsed.values["batch-size"], "--batch-size", 8),
      workers: parsePositiveInt(parsed.values.workers, "--workers", 1),
      force: parsed.values.force ?? false,
    });
    const totals = result.summary.totals;
    console.log(
      `scored ${totals.sequences} sequences (${totals.frames} frames, ` +
        `${result.sidecarsWritten} sidecars written) with ${result.summary.model}`,
    );
    return 0;
  } catch (err) {
    if (err instanceof ScorerError) {
      console.error(`error: ${err.message}`);
      return err.kind === "io" ? 3 : 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 3; // node fs errors carry a code; treat as I/O
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
