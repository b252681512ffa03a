/**
 * Ranking evaluation over encoded groups.
 *
 * Each group is scored row by row and the positive (row 0) gets the rank
 * it would earn under a pessimistic tie rule: every negative scoring
 * greater than or equal to it ranks ahead. A model that only ever ties
 * therefore earns rank group-size, not rank 1.
 *
 * Splitting held-out groups from training groups (by article id or
 * otherwise) is the caller's job; this function measures whatever it is
 * handed.
 */

import type { EncodedGroup } from "./encode.js";

export type RowScorer = (ids: Int32Array, mask: Uint8Array) => number;

export interface RankingMetrics {
  groups: number;
  /** Fraction of groups where the positive strictly outranks every negative. */
  groupAccuracy: number;
  /** Mean reciprocal rank of the positive. */
  mrr: number;
}

export function evaluateRanking(scoreRow: RowScorer,
                                groups: readonly EncodedGroup[]): RankingMetrics {
  if (groups.length === 0) throw new Error("cannot evaluate an empty group list");
  let hits = 0;
  let reciprocalSum = 0;
  for (const group of groups) {
    const positive = scoreRow(group.rows[0].ids, group.rows[0].mask);
    let rank = 1;
    for (let r = 1; r < group.rows.length; r++) {
      const score = scoreRow(group.rows[r].ids, group.rows[r].mask);
      if (score >= positive) rank++;
    }
    if (rank === 1) hits++;
    reciprocalSum += 1 / rank;
  }
  return {
    groups: groups.length,
    groupAccuracy: hits / groups.length,
    mrr: reciprocalSum / groups.length,
  };
}
