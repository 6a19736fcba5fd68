import { CropImage, ScoreModel, ScorerError } from "./types.js";

export interface HttpScoreModelOptions {
  /** Base URL of the scoring endpoint, e.g. http://localhost:9090. */
  endpoint: string;
  /** Model identifier forwarded to the server and into the summary. */
  modelId: string;
  /** Attempts beyond the first on retryable failures (default 3). */
  maxRetries?: number;
  /** First backoff delay in ms; doubles per retry (default 250). */
  backoffMs?: number;
  /** Injectable for tests. */
  fetchImpl?: typeof fetch;
  /** Injectable for tests; receives the delay in ms. */
  sleepImpl?: (ms: number) => Promise<void>;
}

interface ScoreResponse {
  scores: number[];
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Remote scoring model behind a tiny JSON protocol.
 *
 * POST <endpoint>/score with {model, prompt, images:[{width,height,pixels}]}
 * where pixels is base64 RGBA; the reply is {scores:[...]} with one value
 * per image. Network failures and 5xx responses are retried with doubling
 * backoff up to maxRetries; 4xx responses fail immediately since retrying
 * a rejected request cannot help.
 */
export class HttpScoreModel implements ScoreModel {
  readonly id: string;
  private readonly endpoint: string;
  private readonly maxRetries: number;
  private readonly backoffMs: number;
  private readonly fetchImpl: typeof fetch;
  private readonly sleepImpl: (ms: number) => Promise<void>;

  constructor(options: HttpScoreModelOptions) {
    this.endpoint = options.endpoint.replace(/\/$/, "");
    this.id = options.modelId;
    this.maxRetries = options.maxRetries ?? 3;
    this.backoffMs = options.backoffMs ?? 250;
    this.fetchImpl = options.fetchImpl ?? fetch;
    this.sleepImpl = options.sleepImpl ?? defaultSleep;
  }

  async scoreBatch(crops: CropImage[], prompt: string): Promise<number[]> {
    const body = JSON.stringify({
      model: this.id,
      prompt,
      images: crops.map((crop) => ({
        width: crop.width,
        height: crop.height,
        pixels: Buffer.from(crop.pixels).toString("base64"),
      })),
    });

    let lastError = "";
    for (let attempt = 0; attempt <= this.maxRetries; attempt++) {
      if (attempt > 0) {
        await this.sleepImpl(this.backoffMs * 2 ** (attempt - 1));
      }
      let response: Response;
      try {
        response = await this.fetchImpl(`${this.endpoint}/score`, {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body,
        });
      } catch (err) {
        lastError = err instanceof Error ? err.message : String(err);
        continue; // network failure: retryable
      }
      if (response.status >= 500) {
        lastError = `server error ${response.status}`;
        continue; // transient: retryable
      }
      if (!response.ok) {
        throw new ScorerError(
          "validation",
          `scoring endpoint rejected the request (${response.status})`,
        );
      }
      const data = (await response.json()) as ScoreResponse;
      if (!Array.isArray(data.scores) || data.scores.length !== crops.length) {
        throw new ScorerError(
          "validation",
          `endpoint returned ${data.scores?.length ?? "no"} scores for ` +
            `${crops.length} images`,
        );
      }
      // Mapping to [0,1] is a clip; monotone in the raw similarity.
      return data.scores.map((s) => Math.min(1, Math.max(0, s)));
    }
    throw new ScorerError(
      "io",
      `scoring endpoint unreachable after ${this.maxRetries + 1} attempts: ${lastError}`,
    );
  }
}
