import { ScorerError } from "./types.js";

/** Per-category prompt sentence; must match the composition engine's. */
export const PROMPT_TEMPLATE =
  "A close up video of one moving dynamic {category} in changing " +
  "background, moving camera, centred.";

/** Fill the template for one category name. */
export function buildPrompt(category: string): string {
  if (category.trim().length === 0) {
    throw new ScorerError("validation", "category name must be non-empty");
  }
  return PROMPT_TEMPLATE.replace("{category}", category);
}
