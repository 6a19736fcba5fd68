import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterEach, describe, expect, it } from "vitest";
import { MockColorModel } from "../src/mockModel.js";
import { SUMMARY_FILENAME, scoreBank } from "../src/scoring.js";
import { GOLDEN_SCORED, cleanupScratch, scratchBank } from "./helpers.js";

afterEach(cleanupScratch);

const SIDECARS = [
  ["1", "seq000"],
  ["1", "seq001"],
  ["2", "seq000"],
  ["2", "seq001"],
] as const;

describe("golden bank", () => {
  it("reproduces the committed output byte for byte", async () => {
    const root = scratchBank();
    await scoreBank(root, new MockColorModel(), { workers: 2 });
    for (const [cat, seq] of SIDECARS) {
      const fresh = readFileSync(join(root, cat, seq, "scores.txt"), "utf8");
      const golden = readFileSync(
        join(GOLDEN_SCORED, cat, seq, "scores.txt"),
        "utf8",
      );
      expect(fresh, `${cat}/${seq}`).toBe(golden);
    }
    expect(readFileSync(join(root, SUMMARY_FILENAME), "utf8")).toBe(
      readFileSync(join(GOLDEN_SCORED, SUMMARY_FILENAME), "utf8"),
    );
  });

  it("scores each category's planted color sequence consistently", async () => {
    const root = scratchBank();
    const { summary } = await scoreBank(root, new MockColorModel(), {});
    // sprite colors are constant per sequence, so min ~ max per category
    for (const cat of Object.values(summary.categories)) {
      expect(cat.max - cat.min).toBeLessThan(0.05);
    }
    // the two categories land on opposite sides of the 0.21 keep threshold
    expect(summary.categories["1"]!.max).toBeLessThan(0.21);
    expect(summary.categories["2"]!.min).toBeGreaterThanOrEqual(0.21);
  });
});
