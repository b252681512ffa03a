/**
 * Contrastive group loss and the per-batch combination across tasks.
 *
 * A group is one positive score followed by negative scores. The loss is
 * the negative log-probability that the positive outranks the rest under
 * a softmax over the group, computed with max-subtraction so huge scores
 * stay finite.
 *
 * A batch mixes groups from several tasks. The combined objective is the
 * sum over enabled tasks of the mean group loss for that task, weighting
 * every task equally no matter how many groups it contributed. Groups
 * from tasks that are not enabled add exactly nothing.
 */

import type { TaskName } from "./data.js";
import { TASK_NAMES } from "./data.js";

export interface ScoredGroup {
  task: TaskName;
  /** scores[0] is the positive pair. */
  scores: Float64Array;
}

export interface CombinedGrad {
  loss: number;
  /** Mean group loss per enabled task present in the batch. */
  perTask: Map<TaskName, number>;
  /** d(loss)/d(score), aligned with the input groups; zeros for disabled tasks. */
  grads: Float64Array[];
}

/** -log softmax probability of index 0. */
export function groupLoss(scores: ArrayLike<number>): number {
  if (scores.length < 2) {
    throw new Error(`a group needs a positive and at least one negative, got ${scores.length} scores`);
  }
  let max = -Infinity;
  for (let i = 0; i < scores.length; i++) {
    if (scores[i] > max) max = scores[i];
  }
  let z = 0;
  for (let i = 0; i < scores.length; i++) z += Math.exp(scores[i] - max);
  return max - scores[0] + Math.log(z);
}

/** Loss plus d(loss)/d(scores): softmax probabilities minus the positive indicator. */
export function groupLossGrad(scores: ArrayLike<number>): { loss: number; grad: Float64Array } {
  const loss = groupLoss(scores);
  let max = -Infinity;
  for (let i = 0; i < scores.length; i++) {
    if (scores[i] > max) max = scores[i];
  }
  const grad = new Float64Array(scores.length);
  let z = 0;
  for (let i = 0; i < scores.length; i++) {
    const e = Math.exp(scores[i] - max);
    grad[i] = e;
    z += e;
  }
  for (let i = 0; i < grad.length; i++) grad[i] /= z;
  grad[0] -= 1;
  return { loss, grad };
}

function checkBatch(groups: readonly ScoredGroup[], tasks: readonly TaskName[]): Set<TaskName> {
  if (groups.length === 0) throw new Error("combined loss over an empty batch");
  const enabled = new Set(tasks);
  if (enabled.size === 0) throw new Error("no tasks enabled");
  if (!groups.some((group) => enabled.has(group.task))) {
    throw new Error("batch contains no groups from any enabled task");
  }
  return enabled;
}

/** Sum over enabled tasks of that task's mean group loss in the batch. */
export function combinedLoss(groups: readonly ScoredGroup[], tasks: readonly TaskName[]): number {
  return combinedLossWithGrad(groups, tasks).loss;
}

export function combinedLossWithGrad(groups: readonly ScoredGroup[],
                                     tasks: readonly TaskName[]): CombinedGrad {
  const enabled = checkBatch(groups, tasks);
  const counts = new Map<TaskName, number>();
  for (const group of groups) {
    if (!enabled.has(group.task)) continue;
    counts.set(group.task, (counts.get(group.task) ?? 0) + 1);
  }

  const sums = new Map<TaskName, number>();
  const grads: Float64Array[] = [];
  for (const group of groups) {
    if (!enabled.has(group.task)) {
      grads.push(new Float64Array(group.scores.length));
      continue;
    }
    const { loss, grad } = groupLossGrad(group.scores);
    sums.set(group.task, (sums.get(group.task) ?? 0) + loss);
    const weight = 1 / counts.get(group.task)!;
    for (let i = 0; i < grad.length; i++) grad[i] *= weight;
    grads.push(grad);
  }

  const perTask = new Map<TaskName, number>();
  let total = 0;
  for (const task of TASK_NAMES) {
    const sum = sums.get(task);
    if (sum === undefined) continue;
    const mean = sum / counts.get(task)!;
    perTask.set(task, mean);
    total += mean;
  }
  return { loss: total, perTask, grads };
}
