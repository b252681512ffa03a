/**
 * Deterministic single-threaded training loop.
 *
 * Groups are shuffled once per epoch with a seeded generator, walked in
 * fixed-size batches, and updated with a decoupled-weight-decay adaptive
 * moment optimizer. Every epoch records the mean group loss per enabled
 * task over the whole epoch plus their sum, which is the same combined
 * objective the batches optimize.
 *
 * A non-finite loss aborts immediately with enough context to see where
 * training blew up rather than letting the parameters fill with NaN.
 */

import type { TaskName } from "./data.js";
import { TASK_NAMES } from "./data.js";
import type { EncodedGroup } from "./encode.js";
import type { Model, Param } from "./model.js";
import { combinedLossWithGrad, groupLoss, type ScoredGroup } from "./loss.js";
import { deriveRng, shuffleInPlace } from "./rng.js";

export interface TrainConfig {
  tasks: TaskName[];
  epochs: number;
  learningRate: number;
  seed: number;
  batchGroups: number;
  weightDecay: number;
}

export const TRAIN_DEFAULTS = {
  learningRate: 1e-3,
  batchGroups: 8,
  weightDecay: 0.01,
} as const;

export function resolveTrainConfig(partial: Partial<TrainConfig>
    & Pick<TrainConfig, "tasks" | "epochs" | "seed">): TrainConfig {
  const cfg: TrainConfig = { ...TRAIN_DEFAULTS, ...partial };
  if (cfg.tasks.length === 0) throw new Error("tasks must not be empty");
  const unknown = cfg.tasks.filter((task) => !TASK_NAMES.includes(task));
  if (unknown.length > 0) throw new Error(`unknown tasks: ${unknown.join(", ")}`);
  if (!Number.isInteger(cfg.epochs) || cfg.epochs < 1) {
    throw new Error(`epochs must be a positive integer, got ${cfg.epochs}`);
  }
  if (!Number.isInteger(cfg.batchGroups) || cfg.batchGroups < 1) {
    throw new Error(`batchGroups must be a positive integer, got ${cfg.batchGroups}`);
  }
  if (!Number.isFinite(cfg.learningRate) || cfg.learningRate < 0) {
    throw new Error(`learningRate must be >= 0, got ${cfg.learningRate}`);
  }
  if (!Number.isInteger(cfg.seed)) throw new Error(`seed must be an integer, got ${cfg.seed}`);
  if (!Number.isFinite(cfg.weightDecay) || cfg.weightDecay < 0) {
    throw new Error(`weightDecay must be >= 0, got ${cfg.weightDecay}`);
  }
  return cfg;
}

/** Adam with decoupled weight decay and bias correction. */
export class AdamW {
  private readonly m: Float64Array[];
  private readonly v: Float64Array[];
  private step_ = 0;
  private static readonly BETA1 = 0.9;
  private static readonly BETA2 = 0.999;
  private static readonly EPS = 1e-8;

  constructor(private readonly params: readonly Param[],
              private readonly learningRate: number,
              private readonly weightDecay: number) {
    this.m = params.map((param) => new Float64Array(param.data.length));
    this.v = params.map((param) => new Float64Array(param.data.length));
  }

  step(): void {
    this.step_++;
    const correction1 = 1 - Math.pow(AdamW.BETA1, this.step_);
    const correction2 = 1 - Math.pow(AdamW.BETA2, this.step_);
    for (let p = 0; p < this.params.length; p++) {
      const { data, grad } = this.params[p];
      const m = this.m[p];
      const v = this.v[p];
      for (let i = 0; i < data.length; i++) {
        const g = grad[i];
        m[i] = AdamW.BETA1 * m[i] + (1 - AdamW.BETA1) * g;
        v[i] = AdamW.BETA2 * v[i] + (1 - AdamW.BETA2) * g * g;
        const mhat = m[i] / correction1;
        const vhat = v[i] / correction2;
        data[i] -= this.learningRate * (mhat / (Math.sqrt(vhat) + AdamW.EPS)
          + this.weightDecay * data[i]);
      }
    }
  }
}

export interface EpochStats {
  /** 1-based. */
  epoch: number;
  perTask: Map<TaskName, number>;
  combined: number;
}

export interface TrainResult {
  epochs: EpochStats[];
}

/**
 * Train in place. Only groups from enabled tasks participate; every
 * enabled task must have at least one group.
 */
export function train(model: Model, allGroups: readonly EncodedGroup[], cfg: TrainConfig,
                      onEpoch?: (stats: EpochStats) => void): TrainResult {
  const groups = allGroups.filter((group) => cfg.tasks.includes(group.task));
  for (const task of cfg.tasks) {
    if (!groups.some((group) => group.task === task)) {
      throw new Error(`no training groups for enabled task ${task}`);
    }
  }

  const optimizer = new AdamW(model.params, cfg.learningRate, cfg.weightDecay);
  const order = groups.map((_, index) => index);
  const result: TrainResult = { epochs: [] };

  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    shuffleInPlace(order, deriveRng(cfg.seed, `epoch.${epoch}`));
    const lossSums = new Map<TaskName, number>();
    const lossCounts = new Map<TaskName, number>();

    for (let start = 0; start < order.length; start += cfg.batchGroups) {
      const batchIndices = order.slice(start, start + cfg.batchGroups);
      model.zeroGrads();

      const scored: ScoredGroup[] = [];
      const caches = batchIndices.map((index) => {
        const group = groups[index];
        const rowCaches = group.rows.map((row) => model.forward(row.ids, row.mask));
        scored.push({ task: group.task, scores: Float64Array.from(rowCaches, (c) => c.score) });
        return rowCaches;
      });

      const { loss, perTask, grads } = combinedLossWithGrad(scored, cfg.tasks);
      if (!Number.isFinite(loss)) {
        const badGroup = batchIndices.find((index, b) =>
          scored[b].scores.some((score) => !Number.isFinite(score)));
        const where = badGroup === undefined ? "loss only"
          : `group task=${groups[badGroup].task} article=${groups[badGroup].articleId}`;
        throw new Error(
          `training diverged: non-finite loss at epoch ${epoch}, `
          + `batch starting at group ${start} (${where}); `
          + `learning rate ${cfg.learningRate}, batch tasks `
          + [...perTask.keys()].join(","));
      }

      for (let b = 0; b < batchIndices.length; b++) {
        const group = groups[batchIndices[b]];
        const grad = grads[b];
        for (let r = 0; r < group.rows.length; r++) {
          if (grad[r] !== 0) model.backward(caches[b][r].cache, grad[r]);
        }
        const previousSum = lossSums.get(group.task) ?? 0;
        lossSums.set(group.task, previousSum + groupLoss(scored[b].scores));
        lossCounts.set(group.task, (lossCounts.get(group.task) ?? 0) + 1);
      }
      optimizer.step();
    }

    const perTask = new Map<TaskName, number>();
    let combined = 0;
    for (const task of TASK_NAMES) {
      const sum = lossSums.get(task);
      if (sum === undefined) continue;
      const mean = sum / lossCounts.get(task)!;
      perTask.set(task, mean);
      combined += mean;
    }
    const stats: EpochStats = { epoch, perTask, combined };
    result.epochs.push(stats);
    onEpoch?.(stats);
  }
  return result;
}
