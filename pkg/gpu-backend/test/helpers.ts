/**
 * Shared fixtures: frozen cross-language vectors and deterministic
 * well-conditioned inputs for exponentiation tests.
 *
 * The frozen values were produced by an independent implementation of the
 * same published algorithms (SplitMix64 with per-draw mixing, top-53-bit
 * uniform mapping); any drift in the generator or the text format breaks
 * these bytes.
 */

import type { HostMatrix, MatrixF32 } from "../src/matrix.js";
import { randomMatrix, toF32 } from "../src/matrix.js";

/** First four SplitMix64 outputs for seed 0. */
export const SPLITMIX64_SEED0: readonly bigint[] = [
  0xe220a8397b1dcdafn,
  0x6e789e6aa1b965f4n,
  0x06c45d188009454fn,
  0xf88bb8a8724c81ecn,
];

/** randomMatrix(2, "f64", 42) elements, row-major. */
export const UNIFORM_F64_SEED42: readonly number[] = [
  0.2415648787718233, -0.3400896071230799, -0.22139886974486134, -0.15580928347636247,
];

/** randomMatrix(4, "f32", 7) elements (exact float32 values as doubles). */
export const UNIFORM_F32_SEED7: readonly number[] = [
  -0.11017025262117386, -0.4832116961479187, 0.400760680437088, 0.0829302966594696,
  -0.04755810648202896, -0.2505684792995453, -0.03204699605703354, -0.17192326486110687,
  -0.36574169993400574, -0.0868586003780365, -0.3964400589466095, 0.45987406373023987,
  0.4180195927619934, 0.37133175134658813, 0.3640076518058777, 0.048287417739629745,
];

/** Little-endian bytes of the float32 matrix above. */
export const UNIFORM_F32_SEED7_HEX =
  "f1a0e1bd8667f7be8130cd3e5cd7a93d4acc42bd834a80beb64303bda70c30be" +
  "7f42bbbeece2b1bd31facabe9d74eb3eaa06d63e321fbe3e365fba3e07c9453d";

/** The same matrix in the text format, written by an independent producer. */
export const UNIFORM_F32_SEED7_TEXT =
  "4 f32\n" +
  "-0.11017025 -0.4832117 0.40076068 0.0829303\n" +
  "-0.047558106 -0.25056848 -0.032046996 -0.17192326\n" +
  "-0.3657417 -0.0868586 -0.39644006 0.45987406\n" +
  "0.4180196 0.37133175 0.36400765 0.048287418\n";

/** Little-endian hex of a typed array's raw bytes. */
export function toHex(arr: Float32Array | Float64Array): string {
  return Buffer.from(arr.buffer, arr.byteOffset, arr.byteLength).toString("hex");
}

/** Random float32 matrix in [-0.5, 0.5) for multiply tests. */
export function randomF32(n: number, seed: number): MatrixF32 {
  return toF32(randomMatrix(n, "f32", seed));
}

/**
 * Deterministic matrix whose powers stay well inside float32 range:
 * 0.9 on the diagonal plus noise in [-0.025, 0.025), spectral radius
 * comfortably near 1 so A^64 neither overflows nor vanishes.
 */
export function wellConditionedF32(n: number, seed: number): MatrixF32 {
  const noise: HostMatrix = randomMatrix(n, "f32", seed, -0.025, 0.025);
  const data = Float32Array.from(noise.data, Math.fround);
  for (let i = 0; i < n; i += 1) {
    data[i * n + i] = Math.fround(data[i * n + i]! + 0.9);
  }
  return { n, data };
}

/** Widen float32 matrix data to float64 for oracle arithmetic. */
export function widen(m: MatrixF32): Float64Array {
  return Float64Array.from(m.data);
}
