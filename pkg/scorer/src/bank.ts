import { existsSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";
import { SequenceRef, ScorerError } from "./types.js";

const CROP_PATTERN = /^\d+\.png$/;

function listDirs(root: string): string[] {
  return readdirSync(root)
    .filter((name) => statSync(join(root, name)).isDirectory())
    .sort();
}

/**
 * Walk the bank layout: <root>/<category_id>/<sequence_id>/crops/NNN.png.
 *
 * Category directories must be integer-named; each sequence needs a
 * non-empty crops/ directory. Returns sequences sorted by (category,
 * sequence id) so every downstream pass is order-stable.
 */
export function discoverBank(root: string): SequenceRef[] {
  if (!existsSync(root) || !statSync(root).isDirectory()) {
    throw new ScorerError("io", `bank root is not a directory: ${root}`);
  }
  const refs: SequenceRef[] = [];
  for (const catName of listDirs(root)) {
    if (!/^\d+$/.test(catName)) {
      throw new ScorerError(
        "validation",
        `category directory is not an integer id: ${join(root, catName)}`,
      );
    }
    const categoryId = Number(catName);
    for (const seqName of listDirs(join(root, catName))) {
      const dir = join(root, catName, seqName);
      const cropsDir = join(dir, "crops");
      if (!existsSync(cropsDir)) {
        throw new ScorerError("validation", `missing crops directory: ${cropsDir}`);
      }
      const cropPaths = readdirSync(cropsDir)
        .filter((name) => CROP_PATTERN.test(name))
        .sort()
        .map((name) => join(cropsDir, name));
      if (cropPaths.length === 0) {
        throw new ScorerError("validation", `sequence has no crops: ${dir}`);
      }
      refs.push({
        categoryId,
        sequenceId: seqName,
        dir,
        cropPaths,
        scoresPath: join(dir, "scores.txt"),
      });
    }
  }
  if (refs.length === 0) {
    throw new ScorerError("validation", `bank has no sequences: ${root}`);
  }
  return refs;
}
