import { describe, expect, it } from "vitest";
import { Vocab } from "../src/vocab.js";
import { encodePair, resolveModelConfig } from "../src/encode.js";
import { Model } from "../src/model.js";

const vocab = Vocab.build(["a b c d e f g h i j"]);
const cfg = resolveModelConfig({ layers: 2, hiddenDim: 8, heads: 2, maxSeqLen: 16, mlpHidden: 6 });

function freshModel(seed: number): Model {
  const model = new Model(cfg, vocab.size);
  model.initialize(seed);
  return model;
}

describe("Model", () => {
  it("scores a row to a finite scalar", () => {
    const model = freshModel(1);
    const row = encodePair("a b c", "d e", vocab, cfg);
    const score = model.scoreRow(row.ids, row.mask);
    expect(Number.isFinite(score)).toBe(true);
  });

  it("is deterministic for a fixed seed", () => {
    const row = encodePair("a b c", "d e f", vocab, cfg);
    const first = freshModel(42).scoreRow(row.ids, row.mask);
    const second = freshModel(42).scoreRow(row.ids, row.mask);
    expect(second).toBe(first);
  });

  it("produces different parameters for different seeds", () => {
    const row = encodePair("a b c", "d e f", vocab, cfg);
    const first = freshModel(1).scoreRow(row.ids, row.mask);
    const second = freshModel(2).scoreRow(row.ids, row.mask);
    expect(second).not.toBe(first);
  });

  it("ignores ids under the padded tail entirely", () => {
    const model = freshModel(7);
    const row = encodePair("a b", "c", vocab, cfg);
    const clean = model.scoreRow(row.ids, row.mask);

    const garbled = Int32Array.from(row.ids);
    for (let i = row.length; i < cfg.maxSeqLen; i++) {
      garbled[i] = (i % (vocab.size - 4)) + 4;
    }
    const dirty = model.scoreRow(garbled, row.mask);
    expect(dirty).toBe(clean);
  });

  it("rejects an all-padding row", () => {
    const model = freshModel(1);
    const ids = new Int32Array(cfg.maxSeqLen);
    const mask = new Uint8Array(cfg.maxSeqLen);
    expect(() => model.scoreRow(ids, mask)).toThrow(/all-padding/);
  });

  it("rejects a vocab smaller than the special ids", () => {
    expect(() => new Model(cfg, 3)).toThrow(/special/);
  });

  it("registers distinct parameters per layer plus embeddings and head", () => {
    const model = freshModel(1);
    const names = model.params.map((param) => param.name);
    expect(new Set(names).size).toBe(names.length);
    expect(names).toContain("embed");
    expect(names).toContain("l0.wq");
    expect(names).toContain("l1.ln2.b");
    expect(names).toContain("head.w2");
    expect(model.parameterCount()).toBeGreaterThan(vocab.size * cfg.hiddenDim);
  });

  it("uses the sine/cosine position table", () => {
    const table = Model.sinusoidalPositions(4, 4);
    // position 0: sin(0)=0 on even dims, cos(0)=1 on odd dims
    expect([...table.slice(0, 4)]).toEqual([0, 1, 0, 1]);
    expect(table[1 * 4 + 0]).toBeCloseTo(Math.sin(1), 12);
    expect(table[1 * 4 + 1]).toBeCloseTo(Math.cos(1), 12);
    expect(table[1 * 4 + 2]).toBeCloseTo(Math.sin(1 / 100), 12);
  });
});
