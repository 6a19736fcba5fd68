import { readFileSync } from "node:fs";
import { PNG } from "pngjs";
import { CropImage, ScorerError } from "./types.js";

/** Decode one crop; failures name the offending file. */
export function readCrop(path: string): CropImage {
  let raw: Buffer;
  try {
    raw = readFileSync(path);
  } catch {
    throw new ScorerError("io", `cannot read crop file: ${path}`);
  }
  try {
    const png = PNG.sync.read(raw);
    return {
      width: png.width,
      height: png.height,
      pixels: new Uint8Array(png.data),
    };
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    throw new ScorerError("validation", `cannot decode crop ${path}: ${detail}`);
  }
}
