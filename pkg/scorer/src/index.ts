export { discoverBank } from "./bank.js";
export { HttpScoreModel, HttpScoreModelOptions } from "./httpModel.js";
export { MockColorModel, promptColor } from "./mockModel.js";
export { readCrop } from "./png.js";
export { PROMPT_TEMPLATE, buildPrompt } from "./prompts.js";
export {
  SUMMARY_FILENAME,
  ScoreBankOptions,
  ScoreBankResult,
  categoryName,
  scoreBank,
  scoreSequence,
} from "./scoring.js";
export {
  SCORE_DECIMALS,
  formatScores,
  parseScores,
  writeFileAtomic,
} from "./sidecar.js";
export {
  CategorySummary,
  CropImage,
  ScoreModel,
  ScoreSummary,
  ScorerError,
  ScorerErrorKind,
  SequenceRef,
} from "./types.js";
