import { describe, expect, it } from "vitest";
import { CLS_ID, PAD_ID, SEP_ID, UNK_ID, Vocab, tokenize } from "../src/vocab.js";

describe("tokenize", () => {
  it("lowercases and splits on any whitespace", () => {
    expect(tokenize("Solar  Power\n plants\t work")).toEqual(["solar", "power", "plants", "work"]);
  });

  it("returns nothing for blank input", () => {
    expect(tokenize("")).toEqual([]);
    expect(tokenize("   \n ")).toEqual([]);
  });
});

describe("Vocab", () => {
  it("pins the special ids", () => {
    expect(PAD_ID).toBe(0);
    expect(UNK_ID).toBe(1);
    expect(CLS_ID).toBe(2);
    expect(SEP_ID).toBe(3);
  });

  it("ranks by frequency with lexicographic tie-break", () => {
    const vocab = Vocab.build(["b b b", "c c", "a a", "d"]);
    // b (3) first, then a/c tied at 2 in token order, then d.
    expect(vocab.idOf("b")).toBe(4);
    expect(vocab.idOf("a")).toBe(5);
    expect(vocab.idOf("c")).toBe(6);
    expect(vocab.idOf("d")).toBe(7);
    expect(vocab.size).toBe(8);
  });

  it("caps the table at maxSize including specials", () => {
    const vocab = Vocab.build(["b b b", "c c", "a a", "d"], 6);
    expect(vocab.size).toBe(6);
    expect(vocab.idOf("b")).toBe(4);
    expect(vocab.idOf("a")).toBe(5);
    expect(vocab.idOf("c")).toBe(UNK_ID);
    expect(vocab.idOf("d")).toBe(UNK_ID);
  });

  it("rejects a maxSize that cannot hold any real token", () => {
    expect(() => Vocab.build(["a"], 4)).toThrow(/maxSize/);
  });

  it("maps unknown tokens to UNK when encoding", () => {
    const vocab = Vocab.build(["known words only"]);
    expect(vocab.encode("known mystery")).toEqual([vocab.idOf("known"), UNK_ID]);
  });

  it("round-trips through json with ids intact", () => {
    const vocab = Vocab.build(["the quick brown fox the quick"], 100);
    const restored = Vocab.fromJSON(JSON.parse(JSON.stringify(vocab.toJSON())));
    expect(restored.size).toBe(vocab.size);
    for (const token of ["the", "quick", "brown", "fox"]) {
      expect(restored.idOf(token)).toBe(vocab.idOf(token));
    }
  });
});
