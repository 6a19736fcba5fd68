import { CropImage, ScoreModel } from "./types.js";

/**
 * Deterministic offline model for tests and demos.
 *
 * The prompt is hashed to a reference color and each crop is reduced to its
 * mean foreground color; the score is 1 minus the normalized L1 distance
 * between the two. Closer color -> strictly higher score, identical crops
 * -> identical scores, no network involved.
 */
export class MockColorModel implements ScoreModel {
  readonly id = "mock-color";

  async scoreBatch(crops: CropImage[], prompt: string): Promise<number[]> {
    const target = promptColor(prompt);
    return crops.map((crop) => {
      const mean = meanForegroundColor(crop);
      const l1 =
        Math.abs(mean[0] - target[0]) +
        Math.abs(mean[1] - target[1]) +
        Math.abs(mean[2] - target[2]);
      return 1 - l1 / (3 * 255);
    });
  }
}

/** FNV-1a 32-bit; stable across runs and platforms. */
function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash;
}

/** Reference color a prompt "means" to the mock model. */
export function promptColor(prompt: string): [number, number, number] {
  const h = fnv1a(prompt);
  return [h & 0xff, (h >>> 8) & 0xff, (h >>> 16) & 0xff];
}

// Crop filler pixels are the near-black (1,1,1) the bank generator uses
// outside the mask; skip them so the object's own color dominates.
function meanForegroundColor(crop: CropImage): [number, number, number] {
  let r = 0;
  let g = 0;
  let b = 0;
  let n = 0;
  const px = crop.pixels;
  for (let i = 0; i + 3 < px.length; i += 4) {
    const pr = px[i]!;
    const pg = px[i + 1]!;
    const pb = px[i + 2]!;
    if (pr === 1 && pg === 1 && pb === 1) continue;
    r += pr;
    g += pg;
    b += pb;
    n += 1;
  }
  if (n === 0) {
    return [1, 1, 1];
  }
  return [r / n, g / n, b / n];
}
