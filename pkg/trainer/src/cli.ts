/**
 * Command line entry point.
 *
 *   trainer fit  --data DIR --tasks srr,rwi,ati,ltm --epochs N --seed N --out DIR
 *   trainer eval --model DIR --data DIR --report FILE
 *
 * fit reads one {task}.jsonl per enabled task from the data directory
 * (the files the synthesis pipeline emits), builds a vocabulary, trains
 * a scorer, and writes model.json plus a per-epoch trace.tsv into the
 * output directory. eval reloads a saved model, scores a data directory,
 * and writes per-task ranking metrics to a report file.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { corpusTexts, loadDataDir, parseTaskList, type TaskName } from "./data.js";
import { encodeGroups, resolveModelConfig, DEFAULT_MODEL_CONFIG } from "./encode.js";
import { evaluateRanking } from "./evaluate.js";
import { Model } from "./model.js";
import { loadModel, saveModel } from "./serialize.js";
import { resolveTrainConfig, train, TRAIN_DEFAULTS, type EpochStats } from "./train.js";
import { Vocab, DEFAULT_MAX_VOCAB } from "./vocab.js";

export interface CliIo {
  stdout: (line: string) => void;
  stderr: (line: string) => void;
}

const USAGE = `usage: trainer <command> [options]

commands:
  fit   train a relevance scorer on contrastive groups
  eval  score a data directory with a saved model

trainer fit --data DIR --tasks srr,rwi,ati,ltm --epochs N --seed N --out DIR
            [--learning-rate F (${TRAIN_DEFAULTS.learningRate})]
            [--batch-groups N (${TRAIN_DEFAULTS.batchGroups})]
            [--weight-decay F (${TRAIN_DEFAULTS.weightDecay})]
            [--layers N (${DEFAULT_MODEL_CONFIG.layers})]
            [--hidden-dim N (${DEFAULT_MODEL_CONFIG.hiddenDim})]
            [--heads N (${DEFAULT_MODEL_CONFIG.heads})]
            [--max-seq-len N (${DEFAULT_MODEL_CONFIG.maxSeqLen})]
            [--mlp-hidden N (${DEFAULT_MODEL_CONFIG.mlpHidden})]
            [--max-vocab N (${DEFAULT_MAX_VOCAB})]

trainer eval --model DIR --data DIR --report FILE`;

class UsageError extends Error {}

function requireFlag(value: string | undefined, command: string, flag: string): string {
  if (value === undefined) throw new UsageError(`${command} requires --${flag}`);
  return value;
}

function intFlag(raw: string, flag: string, min: number): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < min) {
    throw new UsageError(`--${flag} must be an integer >= ${min}, got ${raw}`);
  }
  return value;
}

function floatFlag(raw: string, flag: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value) || value < 0) {
    throw new UsageError(`--${flag} must be a finite number >= 0, got ${raw}`);
  }
  return value;
}

function formatEpoch(stats: EpochStats, totalEpochs: number, tasks: readonly TaskName[]): string {
  const parts = tasks.map((task) => `${task} ${stats.perTask.get(task)!.toFixed(4)}`);
  return `epoch ${stats.epoch}/${totalEpochs} combined ${stats.combined.toFixed(6)} `
    + `(${parts.join(" ")})`;
}

function traceTsv(tasks: readonly TaskName[], epochs: readonly EpochStats[]): string {
  const header = ["epoch", ...tasks, "combined"].join("\t");
  const rows = epochs.map((stats) => [
    String(stats.epoch),
    ...tasks.map((task) => stats.perTask.get(task)!.toFixed(6)),
    stats.combined.toFixed(6),
  ].join("\t"));
  return [header, ...rows].join("\n") + "\n";
}

function runFit(argv: string[], io: CliIo): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      data: { type: "string" },
      tasks: { type: "string" },
      epochs: { type: "string" },
      seed: { type: "string" },
      out: { type: "string" },
      "learning-rate": { type: "string" },
      "batch-groups": { type: "string" },
      "weight-decay": { type: "string" },
      layers: { type: "string" },
      "hidden-dim": { type: "string" },
      heads: { type: "string" },
      "max-seq-len": { type: "string" },
      "mlp-hidden": { type: "string" },
      "max-vocab": { type: "string" },
      help: { type: "boolean" },
    },
    strict: true,
    allowPositionals: false,
  });
  if (values.help) {
    io.stdout(USAGE);
    return 0;
  }

  const dataDir = requireFlag(values.data, "fit", "data");
  const tasks = parseTaskList(requireFlag(values.tasks, "fit", "tasks"));
  const epochs = intFlag(requireFlag(values.epochs, "fit", "epochs"), "epochs", 1);
  const seed = intFlag(requireFlag(values.seed, "fit", "seed"), "seed", 0);
  const outDir = requireFlag(values.out, "fit", "out");

  const modelCfg = resolveModelConfig({
    layers: values.layers === undefined
      ? DEFAULT_MODEL_CONFIG.layers : intFlag(values.layers, "layers", 1),
    hiddenDim: values["hidden-dim"] === undefined
      ? DEFAULT_MODEL_CONFIG.hiddenDim : intFlag(values["hidden-dim"], "hidden-dim", 1),
    heads: values.heads === undefined
      ? DEFAULT_MODEL_CONFIG.heads : intFlag(values.heads, "heads", 1),
    maxSeqLen: values["max-seq-len"] === undefined
      ? DEFAULT_MODEL_CONFIG.maxSeqLen : intFlag(values["max-seq-len"], "max-seq-len", 4),
    mlpHidden: values["mlp-hidden"] === undefined
      ? DEFAULT_MODEL_CONFIG.mlpHidden : intFlag(values["mlp-hidden"], "mlp-hidden", 1),
  });
  const trainCfg = resolveTrainConfig({
    tasks,
    epochs,
    seed,
    learningRate: values["learning-rate"] === undefined
      ? TRAIN_DEFAULTS.learningRate : floatFlag(values["learning-rate"], "learning-rate"),
    batchGroups: values["batch-groups"] === undefined
      ? TRAIN_DEFAULTS.batchGroups : intFlag(values["batch-groups"], "batch-groups", 1),
    weightDecay: values["weight-decay"] === undefined
      ? TRAIN_DEFAULTS.weightDecay : floatFlag(values["weight-decay"], "weight-decay"),
  });
  const maxVocab = values["max-vocab"] === undefined
    ? DEFAULT_MAX_VOCAB : intFlag(values["max-vocab"], "max-vocab", 5);

  const records = loadDataDir(dataDir, tasks);
  const vocab = Vocab.build(corpusTexts(records), maxVocab);
  const groups = encodeGroups(records, vocab, modelCfg);
  io.stdout(`loaded ${records.length} groups from ${dataDir}, vocab size ${vocab.size}`);

  const model = new Model(modelCfg, vocab.size);
  model.initialize(seed);
  const result = train(model, groups, trainCfg,
    (stats) => io.stdout(formatEpoch(stats, epochs, tasks)));

  saveModel(outDir, model, vocab, tasks, seed);
  fs.writeFileSync(path.join(outDir, "trace.tsv"), traceTsv(tasks, result.epochs));
  io.stdout(`saved model.json and trace.tsv to ${outDir}`);
  return 0;
}

function runEval(argv: string[], io: CliIo): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      model: { type: "string" },
      data: { type: "string" },
      report: { type: "string" },
      help: { type: "boolean" },
    },
    strict: true,
    allowPositionals: false,
  });
  if (values.help) {
    io.stdout(USAGE);
    return 0;
  }

  const modelDir = requireFlag(values.model, "eval", "model");
  const dataDir = requireFlag(values.data, "eval", "data");
  const reportPath = requireFlag(values.report, "eval", "report");

  const saved = loadModel(modelDir);
  const records = loadDataDir(dataDir, saved.tasks);
  const groups = encodeGroups(records, saved.vocab, saved.model.cfg);
  const scoreRow = (ids: Int32Array, mask: Uint8Array) => saved.model.scoreRow(ids, mask);

  const lines = ["task\tgroups\tgroup_accuracy\tmrr"];
  for (const task of saved.tasks) {
    const taskGroups = groups.filter((group) => group.task === task);
    const metrics = evaluateRanking(scoreRow, taskGroups);
    lines.push(`${task}\t${metrics.groups}\t${metrics.groupAccuracy.toFixed(4)}`
      + `\t${metrics.mrr.toFixed(4)}`);
  }
  const overall = evaluateRanking(scoreRow, groups);
  lines.push(`all\t${overall.groups}\t${overall.groupAccuracy.toFixed(4)}`
    + `\t${overall.mrr.toFixed(4)}`);

  const report = lines.join("\n") + "\n";
  fs.mkdirSync(path.dirname(path.resolve(reportPath)), { recursive: true });
  fs.writeFileSync(reportPath, report);
  for (const line of lines) io.stdout(line);
  io.stdout(`wrote ${reportPath}`);
  return 0;
}

export function main(argv: string[], io?: Partial<CliIo>): number {
  const out: CliIo = {
    stdout: io?.stdout ?? ((line) => process.stdout.write(line + "\n")),
    stderr: io?.stderr ?? ((line) => process.stderr.write(line + "\n")),
  };
  const [command, ...rest] = argv;
  try {
    if (command === undefined) {
      out.stderr(USAGE);
      return 1;
    }
    if (command === "--help" || command === "-h" || command === "help") {
      out.stdout(USAGE);
      return 0;
    }
    if (command === "fit") return runFit(rest, out);
    if (command === "eval") return runEval(rest, out);
    throw new UsageError(`unknown command ${command}`);
  } catch (error) {
    const message = error instanceof Error ? error.message : String(error);
    out.stderr(`trainer: error: ${message}`);
    if (error instanceof UsageError) out.stderr(USAGE);
    return 1;
  }
}

const invokedPath = process.argv[1];
if (invokedPath !== undefined
    && import.meta.url === pathToFileURL(fs.realpathSync(invokedPath)).href) {
  process.exit(main(process.argv.slice(2)));
}
