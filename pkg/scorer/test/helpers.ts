import { cpSync, mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join } from "node:path";
import { PNG } from "pngjs";
import { CropImage } from "../src/types.js";

const HERE = fileURLToPath(new URL(".", import.meta.url));

const scratchDirs: string[] = [];

/** Repo-level shared fixture: bank without sidecars. */
export const GOLDEN_BANK = join(HERE, "..", "..", "testdata", "golden-bank");

/** Same bank with committed scorer output, used for byte comparisons. */
export const GOLDEN_SCORED = join(
  HERE, "..", "..", "testdata", "golden-bank-scored",
);

/** Copy the golden bank into a fresh scratch directory. */
export function scratchBank(): string {
  const dir = mkdtempSync(join(tmpdir(), "scorer-test-"));
  cpSync(GOLDEN_BANK, dir, { recursive: true });
  scratchDirs.push(dir);
  return dir;
}

/** Remove every scratch directory created so far. */
export function cleanupScratch(): void {
  while (scratchDirs.length > 0) {
    rmSync(scratchDirs.pop()!, { recursive: true, force: true });
  }
}

/** Uniform-color RGBA crop for model tests. */
export function solidCrop(
  color: [number, number, number],
  size = 8,
): CropImage {
  const pixels = new Uint8Array(size * size * 4);
  for (let i = 0; i < pixels.length; i += 4) {
    pixels[i] = color[0];
    pixels[i + 1] = color[1];
    pixels[i + 2] = color[2];
    pixels[i + 3] = 255;
  }
  return { width: size, height: size, pixels };
}

/** Encode a crop to PNG bytes (for planting corrupt/valid files). */
export function encodePng(crop: CropImage): Buffer {
  const png = new PNG({ width: crop.width, height: crop.height });
  Buffer.from(crop.pixels).copy(png.data);
  return PNG.sync.write(png);
}
