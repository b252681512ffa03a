/**
 * A small transformer cross-encoder with hand-written backprop.
 *
 * The scoring path is the usual one: token embeddings plus fixed
 * sinusoidal position encodings, `layers` blocks of multi-head
 * self-attention and a feed-forward net (each wrapped in residual + layer
 * norm), then a two-layer perceptron on the position-0 hidden state
 * producing one scalar.
 *
 * Computation runs over the masked span only. Padding is excluded from
 * attention entirely, which is exactly what an additive key mask of
 * negative infinity would do, so the ids under the padded tail can never
 * influence the score.
 *
 * All math is plain Float64Array loops: the model is small enough that
 * clarity and determinism matter more than vectorized speed, and the
 * gradient-check test holds the backward pass to the forward pass.
 */

import type { ModelConfig } from "./encode.js";
import { deriveRng, gaussian } from "./rng.js";

const LN_EPS = 1e-5;

export interface Param {
  name: string;
  data: Float64Array;
  grad: Float64Array;
}

interface NormCache {
  /** L x D normalized values, before gamma/beta. */
  xhat: Float64Array;
  /** Per-position 1/sqrt(var + eps). */
  invstd: Float64Array;
}

interface LayerCache {
  xIn: Float64Array;
  q: Float64Array;
  k: Float64Array;
  v: Float64Array;
  /** heads x L x L attention weights, flattened. */
  attn: Float64Array;
  /** L x D concatenated head outputs, before the output projection. */
  ctx: Float64Array;
  ln1: NormCache;
  /** L x D layer-norm output feeding the feed-forward net. */
  ffnIn: Float64Array;
  /** L x F tanh activations. */
  f1: Float64Array;
  ln2: NormCache;
  xOut: Float64Array;
}

export interface ForwardCache {
  ids: Int32Array;
  length: number;
  layers: LayerCache[];
  cls: Float64Array;
  /** Head MLP tanh activations. */
  m: Float64Array;
}

/** Real-span length: positions 0..length-1 carry mask 1. */
function maskedLength(mask: Uint8Array): number {
  let length = 0;
  while (length < mask.length && mask[length] === 1) length++;
  return length;
}

/** out = a (L x K) times b (K x M). */
function matmul(a: Float64Array, b: Float64Array, l: number, k: number, m: number): Float64Array {
  const out = new Float64Array(l * m);
  for (let i = 0; i < l; i++) {
    for (let p = 0; p < k; p++) {
      const av = a[i * k + p];
      if (av === 0) continue;
      const bRow = p * m;
      const outRow = i * m;
      for (let j = 0; j < m; j++) {
        out[outRow + j] += av * b[bRow + j];
      }
    }
  }
  return out;
}

/** dA = dC (L x M) times B^T (M x K). */
function matmulGradA(dc: Float64Array, b: Float64Array, l: number, k: number, m: number): Float64Array {
  const out = new Float64Array(l * k);
  for (let i = 0; i < l; i++) {
    for (let p = 0; p < k; p++) {
      let sum = 0;
      const dcRow = i * m;
      const bRow = p * m;
      for (let j = 0; j < m; j++) {
        sum += dc[dcRow + j] * b[bRow + j];
      }
      out[i * k + p] = sum;
    }
  }
  return out;
}

/** gradB += A^T (K x L) times dC (L x M). */
function accumulateGradB(a: Float64Array, dc: Float64Array, gradB: Float64Array,
                         l: number, k: number, m: number): void {
  for (let i = 0; i < l; i++) {
    const aRow = i * k;
    const dcRow = i * m;
    for (let p = 0; p < k; p++) {
      const av = a[aRow + p];
      if (av === 0) continue;
      const gRow = p * m;
      for (let j = 0; j < m; j++) {
        gradB[gRow + j] += av * dc[dcRow + j];
      }
    }
  }
}

function addBiasInPlace(x: Float64Array, bias: Float64Array, l: number, m: number): void {
  for (let i = 0; i < l; i++) {
    const row = i * m;
    for (let j = 0; j < m; j++) x[row + j] += bias[j];
  }
}

function accumulateColumnSums(dc: Float64Array, gradBias: Float64Array, l: number, m: number): void {
  for (let i = 0; i < l; i++) {
    const row = i * m;
    for (let j = 0; j < m; j++) gradBias[j] += dc[row + j];
  }
}

/** Per-position layer norm; returns output and the backward cache. */
function layerNorm(x: Float64Array, gamma: Float64Array, beta: Float64Array,
                   l: number, d: number): { out: Float64Array; cache: NormCache } {
  const out = new Float64Array(l * d);
  const xhat = new Float64Array(l * d);
  const invstd = new Float64Array(l);
  for (let t = 0; t < l; t++) {
    const row = t * d;
    let mean = 0;
    for (let j = 0; j < d; j++) mean += x[row + j];
    mean /= d;
    let variance = 0;
    for (let j = 0; j < d; j++) {
      const centered = x[row + j] - mean;
      variance += centered * centered;
    }
    variance /= d;
    const inv = 1 / Math.sqrt(variance + LN_EPS);
    invstd[t] = inv;
    for (let j = 0; j < d; j++) {
      const normalized = (x[row + j] - mean) * inv;
      xhat[row + j] = normalized;
      out[row + j] = gamma[j] * normalized + beta[j];
    }
  }
  return { out, cache: { xhat, invstd } };
}

/**
 * Layer-norm backward. dIn = invstd * (dxhat - mean(dxhat)
 * - xhat * mean(dxhat * xhat)), with dxhat = dOut * gamma.
 */
function layerNormBackward(dOut: Float64Array, cache: NormCache,
                           gamma: Float64Array, gradGamma: Float64Array, gradBeta: Float64Array,
                           l: number, d: number): Float64Array {
  const dIn = new Float64Array(l * d);
  const dxhat = new Float64Array(d);
  for (let t = 0; t < l; t++) {
    const row = t * d;
    let meanDxhat = 0;
    let meanDxhatXhat = 0;
    for (let j = 0; j < d; j++) {
      const dy = dOut[row + j];
      const xh = cache.xhat[row + j];
      gradGamma[j] += dy * xh;
      gradBeta[j] += dy;
      const dxh = dy * gamma[j];
      dxhat[j] = dxh;
      meanDxhat += dxh;
      meanDxhatXhat += dxh * xh;
    }
    meanDxhat /= d;
    meanDxhatXhat /= d;
    const inv = cache.invstd[t];
    for (let j = 0; j < d; j++) {
      dIn[row + j] = inv * (dxhat[j] - meanDxhat - cache.xhat[row + j] * meanDxhatXhat);
    }
  }
  return dIn;
}

export class Model {
  readonly cfg: ModelConfig;
  readonly vocabSize: number;
  readonly params: Param[] = [];
  private readonly byName = new Map<string, Param>();
  private readonly positional: Float64Array;

  constructor(cfg: ModelConfig, vocabSize: number) {
    if (vocabSize < 4) throw new Error("vocabSize must cover the special ids");
    this.cfg = cfg;
    this.vocabSize = vocabSize;
    const d = cfg.hiddenDim;
    this.register("embed", vocabSize * d);
    for (let l = 0; l < cfg.layers; l++) {
      for (const proj of ["wq", "wk", "wv", "wo"]) this.register(`l${l}.${proj}`, d * d);
      for (const bias of ["bq", "bk", "bv", "bo"]) this.register(`l${l}.${bias}`, d);
      this.register(`l${l}.ln1.g`, d);
      this.register(`l${l}.ln1.b`, d);
      this.register(`l${l}.w1`, d * cfg.mlpHidden);
      this.register(`l${l}.b1`, cfg.mlpHidden);
      this.register(`l${l}.w2`, cfg.mlpHidden * d);
      this.register(`l${l}.b2`, d);
      this.register(`l${l}.ln2.g`, d);
      this.register(`l${l}.ln2.b`, d);
    }
    this.register("head.w1", d * cfg.mlpHidden);
    this.register("head.b1", cfg.mlpHidden);
    this.register("head.w2", cfg.mlpHidden);
    this.register("head.b2", 1);
    this.positional = Model.sinusoidalPositions(cfg.maxSeqLen, d);
  }

  private register(name: string, size: number): void {
    const param = { name, data: new Float64Array(size), grad: new Float64Array(size) };
    this.params.push(param);
    this.byName.set(name, param);
  }

  /** Fixed sin/cos position table (no gradient). */
  static sinusoidalPositions(maxSeqLen: number, d: number): Float64Array {
    const table = new Float64Array(maxSeqLen * d);
    for (let t = 0; t < maxSeqLen; t++) {
      for (let j = 0; j < d; j++) {
        const pairIndex = j - (j % 2);
        const angle = t / Math.pow(10_000, pairIndex / d);
        table[t * d + j] = j % 2 === 0 ? Math.sin(angle) : Math.cos(angle);
      }
    }
    return table;
  }

  param(name: string): Param {
    const param = this.byName.get(name);
    if (param === undefined) throw new Error(`unknown parameter ${name}`);
    return param;
  }

  parameterCount(): number {
    return this.params.reduce((total, param) => total + param.data.length, 0);
  }

  /**
   * Seeded gaussian init: embeddings at std 1 (comparable to the
   * unit-amplitude position table, so token identity is not drowned out
   * of the attention logits at the start), projections at
   * std 1/sqrt(fanIn), norms at identity, biases at zero.
   */
  initialize(seed: number): void {
    const rng = deriveRng(seed, "init");
    const d = this.cfg.hiddenDim;
    for (const param of this.params) {
      const { name, data } = param;
      param.grad.fill(0);
      if (name === "embed") {
        for (let i = 0; i < data.length; i++) data[i] = gaussian(rng);
      } else if (name.endsWith(".ln1.g") || name.endsWith(".ln2.g")) {
        data.fill(1);
      } else if (name.endsWith(".ln1.b") || name.endsWith(".ln2.b")) {
        data.fill(0);
      } else if (name.includes(".b") || name.endsWith("head.b2")) {
        data.fill(0);
      } else {
        const fanIn = name === "head.w2" ? this.cfg.mlpHidden
          : name.endsWith(".w2") ? this.cfg.mlpHidden
          : d;
        const std = 1 / Math.sqrt(fanIn);
        for (let i = 0; i < data.length; i++) data[i] = std * gaussian(rng);
      }
    }
  }

  zeroGrads(): void {
    for (const param of this.params) param.grad.fill(0);
  }

  /** Score one packed row, keeping every intermediate for backward. */
  forward(ids: Int32Array, mask: Uint8Array): { score: number; cache: ForwardCache } {
    const { hiddenDim: d, heads, mlpHidden: f } = this.cfg;
    const headDim = d / heads;
    const scale = 1 / Math.sqrt(headDim);
    const length = maskedLength(mask);
    if (length === 0) throw new Error("cannot score an all-padding row");

    const embed = this.param("embed").data;
    let x: Float64Array = new Float64Array(length * d);
    for (let t = 0; t < length; t++) {
      const tokenRow = ids[t] * d;
      const posRow = t * d;
      for (let j = 0; j < d; j++) {
        x[t * d + j] = embed[tokenRow + j] + this.positional[posRow + j];
      }
    }

    const layers: LayerCache[] = [];
    for (let l = 0; l < this.cfg.layers; l++) {
      const xIn = x;
      const q = matmul(xIn, this.param(`l${l}.wq`).data, length, d, d);
      addBiasInPlace(q, this.param(`l${l}.bq`).data, length, d);
      const k = matmul(xIn, this.param(`l${l}.wk`).data, length, d, d);
      addBiasInPlace(k, this.param(`l${l}.bk`).data, length, d);
      const v = matmul(xIn, this.param(`l${l}.wv`).data, length, d, d);
      addBiasInPlace(v, this.param(`l${l}.bv`).data, length, d);

      const attn = new Float64Array(heads * length * length);
      const ctx = new Float64Array(length * d);
      const logits = new Float64Array(length);
      for (let h = 0; h < heads; h++) {
        const offset = h * headDim;
        for (let i = 0; i < length; i++) {
          let maxLogit = -Infinity;
          for (let j = 0; j < length; j++) {
            let dot = 0;
            for (let c = 0; c < headDim; c++) {
              dot += q[i * d + offset + c] * k[j * d + offset + c];
            }
            const logit = dot * scale;
            logits[j] = logit;
            if (logit > maxLogit) maxLogit = logit;
          }
          let z = 0;
          for (let j = 0; j < length; j++) {
            const e = Math.exp(logits[j] - maxLogit);
            logits[j] = e;
            z += e;
          }
          const attnRow = (h * length + i) * length;
          for (let j = 0; j < length; j++) {
            const weight = logits[j] / z;
            attn[attnRow + j] = weight;
            if (weight === 0) continue;
            for (let c = 0; c < headDim; c++) {
              ctx[i * d + offset + c] += weight * v[j * d + offset + c];
            }
          }
        }
      }

      const attnProj = matmul(ctx, this.param(`l${l}.wo`).data, length, d, d);
      addBiasInPlace(attnProj, this.param(`l${l}.bo`).data, length, d);
      const residual1 = new Float64Array(length * d);
      for (let i = 0; i < residual1.length; i++) residual1[i] = xIn[i] + attnProj[i];
      const norm1 = layerNorm(residual1, this.param(`l${l}.ln1.g`).data,
                              this.param(`l${l}.ln1.b`).data, length, d);

      const ffnIn = norm1.out;
      const f1 = matmul(ffnIn, this.param(`l${l}.w1`).data, length, d, f);
      addBiasInPlace(f1, this.param(`l${l}.b1`).data, length, f);
      for (let i = 0; i < f1.length; i++) f1[i] = Math.tanh(f1[i]);
      const f2 = matmul(f1, this.param(`l${l}.w2`).data, length, f, d);
      addBiasInPlace(f2, this.param(`l${l}.b2`).data, length, d);
      const residual2 = new Float64Array(length * d);
      for (let i = 0; i < residual2.length; i++) residual2[i] = ffnIn[i] + f2[i];
      const norm2 = layerNorm(residual2, this.param(`l${l}.ln2.g`).data,
                              this.param(`l${l}.ln2.b`).data, length, d);

      layers.push({ xIn, q, k, v, attn, ctx, ln1: norm1.cache, ffnIn, f1,
                    ln2: norm2.cache, xOut: norm2.out });
      x = norm2.out;
    }

    const cls = x.slice(0, d);
    const headW1 = this.param("head.w1").data;
    const headB1 = this.param("head.b1").data;
    const m = new Float64Array(f);
    for (let j = 0; j < f; j++) {
      let sum = headB1[j];
      for (let c = 0; c < d; c++) sum += cls[c] * headW1[c * f + j];
      m[j] = Math.tanh(sum);
    }
    const headW2 = this.param("head.w2").data;
    let score = this.param("head.b2").data[0];
    for (let j = 0; j < f; j++) score += m[j] * headW2[j];

    return { score, cache: { ids, length, layers, cls, m } };
  }

  /** Accumulate d(loss)/d(params) given d(loss)/d(score). */
  backward(cache: ForwardCache, dScore: number): void {
    const { hiddenDim: d, heads, mlpHidden: f } = this.cfg;
    const headDim = d / heads;
    const scale = 1 / Math.sqrt(headDim);
    const length = cache.length;

    const headW1 = this.param("head.w1");
    const headB1 = this.param("head.b1");
    const headW2 = this.param("head.w2");
    const headB2 = this.param("head.b2");
    headB2.grad[0] += dScore;
    const dCls = new Float64Array(d);
    for (let j = 0; j < f; j++) {
      const mj = cache.m[j];
      headW2.grad[j] += dScore * mj;
      const dPre = dScore * headW2.data[j] * (1 - mj * mj);
      headB1.grad[j] += dPre;
      for (let c = 0; c < d; c++) {
        headW1.grad[c * f + j] += cache.cls[c] * dPre;
        dCls[c] += headW1.data[c * f + j] * dPre;
      }
    }

    let dX = new Float64Array(length * d);
    dX.set(dCls, 0);

    for (let l = this.cfg.layers - 1; l >= 0; l--) {
      const layer = cache.layers[l];

      const dResidual2 = layerNormBackward(dX, layer.ln2, this.param(`l${l}.ln2.g`).data,
                                           this.param(`l${l}.ln2.g`).grad,
                                           this.param(`l${l}.ln2.b`).grad, length, d);
      // residual: dFfnIn starts as a copy; the f2 branch adds to it below.
      const dFfnIn = Float64Array.from(dResidual2);
      const dF1 = matmulGradA(dResidual2, this.param(`l${l}.w2`).data, length, f, d);
      accumulateGradB(layer.f1, dResidual2, this.param(`l${l}.w2`).grad, length, f, d);
      accumulateColumnSums(dResidual2, this.param(`l${l}.b2`).grad, length, d);
      for (let i = 0; i < dF1.length; i++) {
        const activated = layer.f1[i];
        dF1[i] *= 1 - activated * activated;
      }
      const dFromFfn = matmulGradA(dF1, this.param(`l${l}.w1`).data, length, d, f);
      accumulateGradB(layer.ffnIn, dF1, this.param(`l${l}.w1`).grad, length, d, f);
      accumulateColumnSums(dF1, this.param(`l${l}.b1`).grad, length, f);
      for (let i = 0; i < dFfnIn.length; i++) dFfnIn[i] += dFromFfn[i];

      const dResidual1 = layerNormBackward(dFfnIn, layer.ln1, this.param(`l${l}.ln1.g`).data,
                                           this.param(`l${l}.ln1.g`).grad,
                                           this.param(`l${l}.ln1.b`).grad, length, d);
      const dXin = Float64Array.from(dResidual1);

      const dCtx = matmulGradA(dResidual1, this.param(`l${l}.wo`).data, length, d, d);
      accumulateGradB(layer.ctx, dResidual1, this.param(`l${l}.wo`).grad, length, d, d);
      accumulateColumnSums(dResidual1, this.param(`l${l}.bo`).grad, length, d);

      const dQ = new Float64Array(length * d);
      const dK = new Float64Array(length * d);
      const dV = new Float64Array(length * d);
      const dAttnRow = new Float64Array(length);
      for (let h = 0; h < heads; h++) {
        const offset = h * headDim;
        for (let i = 0; i < length; i++) {
          const attnRow = (h * length + i) * length;
          let dot = 0;
          for (let j = 0; j < length; j++) {
            let sum = 0;
            for (let c = 0; c < headDim; c++) {
              sum += dCtx[i * d + offset + c] * layer.v[j * d + offset + c];
            }
            dAttnRow[j] = sum;
            dot += sum * layer.attn[attnRow + j];
          }
          for (let j = 0; j < length; j++) {
            const weight = layer.attn[attnRow + j];
            // softmax backward: dlogit = a * (dattn - <dattn, a>)
            const dLogit = weight * (dAttnRow[j] - dot);
            for (let c = 0; c < headDim; c++) {
              dQ[i * d + offset + c] += scale * dLogit * layer.k[j * d + offset + c];
              dK[j * d + offset + c] += scale * dLogit * layer.q[i * d + offset + c];
              dV[j * d + offset + c] += weight * dCtx[i * d + offset + c];
            }
          }
        }
      }

      for (const [dProjected, weightName, biasName] of [
        [dQ, `l${l}.wq`, `l${l}.bq`],
        [dK, `l${l}.wk`, `l${l}.bk`],
        [dV, `l${l}.wv`, `l${l}.bv`],
      ] as const) {
        const dFromProj = matmulGradA(dProjected, this.param(weightName).data, length, d, d);
        accumulateGradB(layer.xIn, dProjected, this.param(weightName).grad, length, d, d);
        accumulateColumnSums(dProjected, this.param(biasName).grad, length, d);
        for (let i = 0; i < dXin.length; i++) dXin[i] += dFromProj[i];
      }

      dX = dXin;
    }

    const embedGrad = this.param("embed").grad;
    for (let t = 0; t < length; t++) {
      const tokenRow = cache.ids[t] * d;
      for (let j = 0; j < d; j++) embedGrad[tokenRow + j] += dX[t * d + j];
    }
  }

  /** Score without keeping the cache (evaluation path). */
  scoreRow(ids: Int32Array, mask: Uint8Array): number {
    return this.forward(ids, mask).score;
  }
}
