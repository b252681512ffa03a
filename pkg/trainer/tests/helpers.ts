/**
 * Shared test fixtures.
 *
 * plantedCorpus builds a synthetic instance set with a deliberately
 * learnable signal: every article carries one key token out of twenty,
 * the query and the true document of a group share that key, and every
 * negative carries a different key. A scorer that learns "same key on
 * both sides of the separator" solves the ranking exactly, so training
 * tests have a clean target, while an untrained model sees five
 * interchangeable rows per group.
 */

import * as fs from "node:fs";
import { mulberry32 } from "../src/rng.js";
import { TASK_NAMES, type InstanceRecord, type TaskName } from "../src/data.js";
import type { ModelConfig } from "../src/encode.js";

export const TEST_MODEL_CONFIG: ModelConfig = {
  layers: 2,
  hiddenDim: 32,
  heads: 2,
  maxSeqLen: 16,
  mlpHidden: 32,
};

// 19 keys: coprime to the %5 article hold-out, so every key shows up as a
// matching pair on both sides of any split instead of four keys being
// positively matched only in held-out articles.
const KEYS = Array.from({ length: 19 }, (_, i) => `k${String(i).padStart(2, "0")}`);
const FILLER = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"];

export interface PlantedOptions {
  articles?: number;
  groupsPerArticle?: number;
  negatives?: number;
  seed?: number;
}

export function plantedCorpus(options: PlantedOptions = {}): InstanceRecord[] {
  const articles = options.articles ?? 200;
  const groupsPerArticle = options.groupsPerArticle ?? 5;
  const negatives = options.negatives ?? 4;
  if (negatives >= KEYS.length) throw new Error("not enough keys for distinct negatives");
  const rng = mulberry32(options.seed ?? 1234);
  const filler = () => FILLER[Math.floor(rng() * FILLER.length)];

  const records: InstanceRecord[] = [];
  for (let articleId = 1; articleId <= articles; articleId++) {
    const key = KEYS[articleId % KEYS.length];
    for (let g = 0; g < groupsPerArticle; g++) {
      const task: TaskName = TASK_NAMES[g % TASK_NAMES.length];
      const wrongKeys = Array.from({ length: negatives },
        (_, i) => KEYS[(articleId + 1 + i) % KEYS.length]);
      if (task === "rwi") {
        records.push({
          task,
          articleId,
          query: `${filler()} ${key}`,
          positive: `${key} ${filler()} ${filler()}`,
          negatives: wrongKeys.map((wrong) => `${filler()} ${wrong}`),
        });
      } else {
        records.push({
          task,
          articleId,
          query: `${filler()} ${key} ${filler()}`,
          positive: `${key} ${filler()}`,
          negatives: wrongKeys.map((wrong) => `${wrong} ${filler()}`),
        });
      }
    }
  }
  return records;
}

/** Write records into {task}.jsonl files under dir, pipeline-style. */
export function writeCorpusDir(dir: string, records: readonly InstanceRecord[]): void {
  const byTask = new Map<TaskName, string[]>();
  for (const record of records) {
    const line = JSON.stringify({
      task: record.task,
      article_id: record.articleId,
      query: record.query,
      positive: record.positive,
      negatives: record.negatives,
    });
    const lines = byTask.get(record.task) ?? [];
    lines.push(line);
    byTask.set(record.task, lines);
  }
  for (const [task, lines] of byTask) {
    fs.writeFileSync(`${dir}/${task}.jsonl`, lines.join("\n") + "\n");
  }
}
