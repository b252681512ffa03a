/** Public surface of the trainer library. */

export { TASK_NAMES, parseTaskList, loadDataDir, readInstanceFile, splitByArticle,
         corpusTexts } from "./data.js";
export type { TaskName, InstanceRecord } from "./data.js";
export { Vocab, tokenize, PAD_ID, UNK_ID, CLS_ID, SEP_ID, DEFAULT_MAX_VOCAB } from "./vocab.js";
export { DEFAULT_MODEL_CONFIG, resolveModelConfig, encodePair, encodeGroup,
         encodeGroups } from "./encode.js";
export type { ModelConfig, EncodedRow, EncodedGroup } from "./encode.js";
export { Model } from "./model.js";
export { groupLoss, groupLossGrad, combinedLoss, combinedLossWithGrad } from "./loss.js";
export type { ScoredGroup } from "./loss.js";
export { train, resolveTrainConfig, AdamW, TRAIN_DEFAULTS } from "./train.js";
export type { TrainConfig, TrainResult, EpochStats } from "./train.js";
export { evaluateRanking } from "./evaluate.js";
export type { RankingMetrics, RowScorer } from "./evaluate.js";
export { saveModel, loadModel } from "./serialize.js";
export { deriveRng, mulberry32 } from "./rng.js";
