/**
 * Reading the data-synthesis pipeline's task files.
 *
 * A data directory holds one jsonl file per task ({task}.jsonl). Each line
 * is one training group: a query, one positive text, and the negatives it
 * competes against. This module is the only place that knows that schema;
 * everything downstream works on typed records.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

export const TASK_NAMES = ["srr", "rwi", "ati", "ltm"] as const;
export type TaskName = (typeof TASK_NAMES)[number];

export interface InstanceRecord {
  task: TaskName;
  articleId: number;
  query: string;
  positive: string;
  negatives: string[];
}

export function isTaskName(value: string): value is TaskName {
  return (TASK_NAMES as readonly string[]).includes(value);
}

/** Parse a comma-separated task list, rejecting unknown names. */
export function parseTaskList(list: string): TaskName[] {
  const names = list.split(",").map((part) => part.trim().toLowerCase()).filter(Boolean);
  if (names.length === 0) {
    throw new Error("task list is empty");
  }
  const seen = new Set<TaskName>();
  for (const name of names) {
    if (!isTaskName(name)) {
      throw new Error(`unknown task ${JSON.stringify(name)}; expected ${TASK_NAMES.join(", ")}`);
    }
    seen.add(name);
  }
  return TASK_NAMES.filter((name) => seen.has(name));
}

function asRecord(value: unknown, where: string): InstanceRecord {
  if (typeof value !== "object" || value === null) {
    throw new Error(`${where}: not an object`);
  }
  const raw = value as Record<string, unknown>;
  const task = raw["task"];
  const articleId = raw["article_id"];
  const query = raw["query"];
  const positive = raw["positive"];
  const negatives = raw["negatives"];
  if (typeof task !== "string" || !isTaskName(task)) {
    throw new Error(`${where}: bad task ${JSON.stringify(task)}`);
  }
  if (typeof articleId !== "number" || !Number.isInteger(articleId)) {
    throw new Error(`${where}: bad article_id`);
  }
  if (typeof query !== "string" || typeof positive !== "string") {
    throw new Error(`${where}: query and positive must be strings`);
  }
  if (!Array.isArray(negatives) || negatives.length === 0 ||
      negatives.some((n) => typeof n !== "string")) {
    throw new Error(`${where}: negatives must be a non-empty string array`);
  }
  return { task, articleId, query, positive, negatives: negatives as string[] };
}

/** Read one {task}.jsonl file into records. */
export function readInstanceFile(path: string): InstanceRecord[] {
  const text = readFileSync(path, "utf8");
  const records: InstanceRecord[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0) continue;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch {
      throw new Error(`${path} line ${i + 1}: not valid json`);
    }
    records.push(asRecord(parsed, `${path} line ${i + 1}`));
  }
  return records;
}

/**
 * Load the task files for the requested tasks from a data directory.
 * A missing or empty file for an enabled task is an error: training
 * requires at least one group per task it optimizes.
 */
export function loadDataDir(dir: string, tasks: readonly TaskName[]): InstanceRecord[] {
  const all: InstanceRecord[] = [];
  for (const task of tasks) {
    const path = join(dir, `${task}.jsonl`);
    let records: InstanceRecord[];
    try {
      records = readInstanceFile(path);
    } catch (err) {
      if ((err as NodeJS.ErrnoException).code === "ENOENT") {
        throw new Error(`no ${task}.jsonl in ${dir} for enabled task ${task}`);
      }
      throw err;
    }
    if (records.length === 0) {
      throw new Error(`${path} holds no groups for enabled task ${task}`);
    }
    if (records.some((record) => record.task !== task)) {
      throw new Error(`${path} contains records for a different task`);
    }
    all.push(...records);
  }
  return all;
}

/**
 * Deterministic train/held-out split on article id, so every group of an
 * article lands on the same side. `holdOutEvery` = 5 keeps roughly one
 * article in five for evaluation.
 */
export function splitByArticle(
  records: readonly InstanceRecord[],
  holdOutEvery: number = 5,
): { train: InstanceRecord[]; heldOut: InstanceRecord[] } {
  if (holdOutEvery < 2) {
    throw new Error("holdOutEvery must be at least 2");
  }
  const train: InstanceRecord[] = [];
  const heldOut: InstanceRecord[] = [];
  for (const record of records) {
    (record.articleId % holdOutEvery === 0 ? heldOut : train).push(record);
  }
  return { train, heldOut };
}

/** Every text field of a record stream, for vocabulary building. */
export function* corpusTexts(records: Iterable<InstanceRecord>): Generator<string> {
  for (const record of records) {
    yield record.query;
    yield record.positive;
    yield* record.negatives;
  }
}
