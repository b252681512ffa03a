/**
 * Whitespace word vocabulary with four reserved ids.
 *
 * Tokenization is lowercase + whitespace split, nothing fancier: the
 * training data is already plain text, and the model only needs stable
 * ids. Ranking is by descending corpus frequency with lexicographic
 * tie-breaks, so the same corpus always yields the same mapping.
 */

export const PAD_ID = 0;
export const UNK_ID = 1;
export const CLS_ID = 2;
export const SEP_ID = 3;

/** Number of reserved ids below the first real token. */
export const SPECIAL_TOKENS = 4;

export const DEFAULT_MAX_VOCAB = 20_000;

/** Lowercase whitespace tokenizer shared by building and encoding. */
export function tokenize(text: string): string[] {
  const trimmed = text.toLowerCase().trim();
  return trimmed.length === 0 ? [] : trimmed.split(/\s+/);
}

export interface VocabJson {
  maxSize: number;
  tokens: string[];
}

export class Vocab {
  private readonly index: Map<string, number>;

  private constructor(
    readonly tokens: string[],
    readonly maxSize: number,
  ) {
    this.index = new Map();
    tokens.forEach((token, i) => this.index.set(token, i + SPECIAL_TOKENS));
  }

  /** Total id count including the four specials. */
  get size(): number {
    return this.tokens.length + SPECIAL_TOKENS;
  }

  /** Id for a (already lowercased) token, UNK when absent. */
  idOf(token: string): number {
    return this.index.get(token) ?? UNK_ID;
  }

  /** Ids for a raw text, via the shared tokenizer. */
  encode(text: string): number[] {
    return tokenize(text).map((token) => this.idOf(token));
  }

  /**
   * Build from a text corpus: count tokens, rank by frequency (ties by
   * lexicographic token), keep the top maxSize - 4.
   */
  static build(texts: Iterable<string>, maxSize: number = DEFAULT_MAX_VOCAB): Vocab {
    if (maxSize <= SPECIAL_TOKENS) {
      throw new Error(`vocab maxSize must exceed ${SPECIAL_TOKENS}, got ${maxSize}`);
    }
    const counts = new Map<string, number>();
    for (const text of texts) {
      for (const token of tokenize(text)) {
        counts.set(token, (counts.get(token) ?? 0) + 1);
      }
    }
    const ranked = [...counts.entries()].sort((a, b) =>
      b[1] - a[1] || (a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0),
    );
    const kept = ranked.slice(0, maxSize - SPECIAL_TOKENS).map(([token]) => token);
    return new Vocab(kept, maxSize);
  }

  toJSON(): VocabJson {
    return { maxSize: this.maxSize, tokens: [...this.tokens] };
  }

  static fromJSON(json: VocabJson): Vocab {
    return new Vocab([...json.tokens], json.maxSize);
  }
}
