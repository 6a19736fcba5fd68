import { describe, expect, it } from "vitest";
import { MockColorModel, promptColor } from "../src/mockModel.js";
import { buildPrompt } from "../src/prompts.js";
import { solidCrop } from "./helpers.js";

const model = new MockColorModel();

describe("mock color model", () => {
  it("is deterministic across calls", async () => {
    const crops = [solidCrop([200, 40, 40]), solidCrop([10, 200, 10])];
    const a = await model.scoreBatch(crops, buildPrompt("bear"));
    const b = await model.scoreBatch(crops, buildPrompt("bear"));
    expect(a).toEqual(b);
  });

  it("gives identical crops identical scores", async () => {
    const crop = solidCrop([120, 50, 220]);
    const scores = await model.scoreBatch(
      [crop, crop, crop],
      buildPrompt("eagle"),
    );
    expect(new Set(scores).size).toBe(1);
  });

  it("stays inside [0, 1]", async () => {
    const crops = [
      solidCrop([0, 0, 0]),
      solidCrop([255, 255, 255]),
      solidCrop([1, 1, 1]), // pure filler falls back to filler color
    ];
    const scores = await model.scoreBatch(crops, buildPrompt("fox"));
    for (const s of scores) {
      expect(s).toBeGreaterThanOrEqual(0);
      expect(s).toBeLessThanOrEqual(1);
    }
  });

  it("ranks the planted category above a mismatched crop", async () => {
    // hand-built sanity pair: one crop painted the prompt's own color,
    // one painted the farthest-away color
    const prompt = buildPrompt("bear");
    const target = promptColor(prompt);
    const planted = solidCrop(target);
    const far: [number, number, number] = [
      target[0] < 128 ? 255 : 0,
      target[1] < 128 ? 255 : 0,
      target[2] < 128 ? 255 : 0,
    ];
    const mismatched = solidCrop(far);
    const [high, low] = await model.scoreBatch([planted, mismatched], prompt);
    expect(high).toBe(1);
    expect(high!).toBeGreaterThan(low!);
  });

  it("skips filler pixels when averaging", async () => {
    // half filler, half color: mean must be the color, not the blend
    const crop = solidCrop([100, 100, 100], 4);
    for (let i = 0; i < crop.pixels.length / 2; i += 4) {
      crop.pixels[i] = 1;
      crop.pixels[i + 1] = 1;
      crop.pixels[i + 2] = 1;
    }
    const pure = solidCrop([100, 100, 100], 4);
    const [a, b] = await model.scoreBatch([crop, pure], buildPrompt("owl"));
    expect(a).toBe(b);
  });
});
