/**
 * Packing query/document pairs into fixed-length token rows.
 *
 * A row is [CLS] query [SEP] document [SEP] padded out to maxSeqLen, with
 * a 0/1 mask over the real span. When the pair is too long the document
 * gives way first and the query is cut only if it alone overflows, so the
 * query survives whenever it can.
 *
 * A group stacks the positive pairing at row 0 and one row per negative.
 * For srr/ati/ltm the negatives are rival documents against one query;
 * rwi flips the roles, pitting forged queries against the true one over a
 * single shared document.
 */

import type { InstanceRecord, TaskName } from "./data.js";
import { CLS_ID, PAD_ID, SEP_ID, Vocab } from "./vocab.js";

export interface ModelConfig {
  layers: number;
  hiddenDim: number;
  heads: number;
  maxSeqLen: number;
  mlpHidden: number;
}

export const DEFAULT_MODEL_CONFIG: ModelConfig = {
  layers: 2,
  hiddenDim: 64,
  heads: 4,
  maxSeqLen: 128,
  mlpHidden: 64,
};

/** Fill in defaults and reject inconsistent dimensions. */
export function resolveModelConfig(partial: Partial<ModelConfig> = {}): ModelConfig {
  const cfg = { ...DEFAULT_MODEL_CONFIG, ...partial };
  if (cfg.layers < 1) throw new Error("layers must be at least 1");
  if (cfg.hiddenDim < 1 || cfg.heads < 1 || cfg.mlpHidden < 1) {
    throw new Error("hiddenDim, heads and mlpHidden must be positive");
  }
  if (cfg.hiddenDim % cfg.heads !== 0) {
    throw new Error(`hiddenDim ${cfg.hiddenDim} not divisible by heads ${cfg.heads}`);
  }
  if (cfg.maxSeqLen < 4) throw new Error("maxSeqLen must be at least 4");
  return cfg;
}

export interface EncodedRow {
  ids: Int32Array;
  mask: Uint8Array;
  /** Real-token count; mask[i] = 1 exactly for i < length. */
  length: number;
}

export interface EncodedGroup {
  task: TaskName;
  articleId: number;
  /** Row 0 is the positive pairing. */
  rows: EncodedRow[];
}

/** Pack one (query, document) pair into an id row plus mask. */
export function encodePair(
  query: string,
  document: string,
  vocab: Vocab,
  cfg: ModelConfig,
): EncodedRow {
  let queryIds = vocab.encode(query);
  let documentIds = vocab.encode(document);
  const budget = cfg.maxSeqLen - 3;
  if (queryIds.length + documentIds.length > budget) {
    documentIds = documentIds.slice(0, Math.max(0, budget - queryIds.length));
    if (queryIds.length > budget) {
      queryIds = queryIds.slice(0, budget);
    }
  }
  const ids = new Int32Array(cfg.maxSeqLen).fill(PAD_ID);
  const mask = new Uint8Array(cfg.maxSeqLen);
  let at = 0;
  ids[at++] = CLS_ID;
  for (const id of queryIds) ids[at++] = id;
  ids[at++] = SEP_ID;
  for (const id of documentIds) ids[at++] = id;
  ids[at++] = SEP_ID;
  mask.fill(1, 0, at);
  return { ids, mask, length: at };
}

/** Encode one pipeline record into its score-ready group. */
export function encodeGroup(record: InstanceRecord, vocab: Vocab, cfg: ModelConfig): EncodedGroup {
  const rows: EncodedRow[] = [];
  if (record.task === "rwi") {
    rows.push(encodePair(record.query, record.positive, vocab, cfg));
    for (const fakeQuery of record.negatives) {
      rows.push(encodePair(fakeQuery, record.positive, vocab, cfg));
    }
  } else {
    rows.push(encodePair(record.query, record.positive, vocab, cfg));
    for (const negative of record.negatives) {
      rows.push(encodePair(record.query, negative, vocab, cfg));
    }
  }
  return { task: record.task, articleId: record.articleId, rows };
}

export function encodeGroups(
  records: readonly InstanceRecord[],
  vocab: Vocab,
  cfg: ModelConfig,
): EncodedGroup[] {
  return records.map((record) => encodeGroup(record, vocab, cfg));
}
