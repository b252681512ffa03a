/**
 * Model directory format.
 *
 * A saved model is a directory holding one model.json with the
 * architecture config, the enabled tasks, the training seed, the
 * vocabulary, and every parameter tensor as a plain number array. JSON
 * round-trips doubles exactly, and the arrays keep the file inspectable
 * with nothing but a text editor, which matters more here than
 * compactness.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import type { TaskName } from "./data.js";
import { parseTaskList } from "./data.js";
import { resolveModelConfig, type ModelConfig } from "./encode.js";
import { Model } from "./model.js";
import { Vocab, type VocabJson } from "./vocab.js";

const FORMAT = 1;

interface ModelFile {
  format: number;
  modelConfig: ModelConfig;
  tasks: TaskName[];
  seed: number;
  vocab: VocabJson;
  params: Record<string, number[]>;
}

export interface SavedModel {
  model: Model;
  vocab: Vocab;
  tasks: TaskName[];
  seed: number;
}

export function saveModel(dir: string, model: Model, vocab: Vocab,
                          tasks: readonly TaskName[], seed: number): void {
  const params: Record<string, number[]> = {};
  for (const param of model.params) params[param.name] = Array.from(param.data);
  const file: ModelFile = {
    format: FORMAT,
    modelConfig: model.cfg,
    tasks: [...tasks],
    seed,
    vocab: vocab.toJSON(),
    params,
  };
  fs.mkdirSync(dir, { recursive: true });
  fs.writeFileSync(path.join(dir, "model.json"), JSON.stringify(file));
}

export function loadModel(dir: string): SavedModel {
  const filePath = path.join(dir, "model.json");
  let raw: string;
  try {
    raw = fs.readFileSync(filePath, "utf8");
  } catch (error) {
    throw new Error(`cannot read ${filePath}: ${(error as Error).message}`);
  }
  const file = JSON.parse(raw) as ModelFile;
  if (file.format !== FORMAT) {
    throw new Error(`${filePath}: unsupported format ${file.format}, expected ${FORMAT}`);
  }
  const cfg = resolveModelConfig(file.modelConfig);
  const tasks = parseTaskList(file.tasks.join(","));
  if (!Number.isInteger(file.seed)) throw new Error(`${filePath}: seed must be an integer`);
  const vocab = Vocab.fromJSON(file.vocab);
  const model = new Model(cfg, vocab.size);
  for (const param of model.params) {
    const values = file.params[param.name];
    if (values === undefined) throw new Error(`${filePath}: missing parameter ${param.name}`);
    if (values.length !== param.data.length) {
      throw new Error(`${filePath}: parameter ${param.name} has ${values.length} values, `
        + `expected ${param.data.length}`);
    }
    param.data.set(values);
  }
  return { model, vocab, tasks, seed: file.seed };
}
