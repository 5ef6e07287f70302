/**
 * Host-side reference multiplies and the error metrics used to judge a
 * device result.
 *
 * The float32 references accumulate each output element over the shared
 * dimension in ascending order with one rounded multiply and one rounded
 * add per term — no fused multiply-add — so they are reproducible
 * bit-for-bit anywhere.  Devices may fuse and reassociate, which is why
 * conformance is a tolerance check, never bitwise.
 */

import type { MatrixF32 } from "./matrix.js";
import { ValidationError } from "./errors.js";
import type { TileShape } from "./tiles.js";
import { checkDivisibility } from "./tiles.js";

export const EPS_F32 = 2 ** -24;

/** Tolerance for one device multiply against the host reference. */
export function deviceTol(n: number): number {
  return n * EPS_F32 * 64;
}

/** Tolerance for a device N-th power against the host reference. */
export function exponentiateTol(power: number, n: number): number {
  return power * n * EPS_F32 * 64;
}

function checkPair(a: MatrixF32, b: MatrixF32): void {
  if (a.n !== b.n) {
    throw new ValidationError(`matrix orders differ: ${a.n} vs ${b.n}`);
  }
}

/** C = A * B in float32, ascending-k scalar accumulation. */
export function matmulNaiveF32(a: MatrixF32, b: MatrixF32): MatrixF32 {
  checkPair(a, b);
  const n = a.n;
  const av = a.data;
  const bv = b.data;
  const out = new Float32Array(n * n);
  for (let i = 0; i < n; i += 1) {
    for (let j = 0; j < n; j += 1) {
      let acc = 0;
      for (let k = 0; k < n; k += 1) {
        acc = Math.fround(acc + Math.fround(av[i * n + k]! * bv[k * n + j]!));
      }
      out[i * n + j] = acc;
    }
  }
  return { n, data: out };
}

/**
 * Tile-phased float32 reference mirroring the kernel's accumulation order.
 * Vector width 1 walks k ascending (bitwise equal to `matmulNaiveF32`);
 * vector width 4 keeps four lane partial sums (lane = k mod 4) folded
 * left-to-right at the end, which reassociates the sum.
 */
export function matmulTiledF32(
  a: MatrixF32,
  b: MatrixF32,
  tile: TileShape,
  vectorWidth: 1 | 4 = 1,
): MatrixF32 {
  checkPair(a, b);
  const n = a.n;
  checkDivisibility(n, tile);
  if (vectorWidth === 4 && tile.cols % 4 !== 0) {
    throw new ValidationError(`vector width 4 needs tile cols divisible by 4, got ${tile.cols}`);
  }
  const av = a.data;
  const bv = b.data;
  const out = new Float32Array(n * n);
  const lanes = new Float32Array(4);
  for (let i = 0; i < n; i += 1) {
    for (let j = 0; j < n; j += 1) {
      if (vectorWidth === 1) {
        let acc = 0;
        for (let k = 0; k < n; k += 1) {
          acc = Math.fround(acc + Math.fround(av[i * n + k]! * bv[k * n + j]!));
        }
        out[i * n + j] = acc;
      } else {
        lanes.fill(0);
        for (let k = 0; k < n; k += 1) {
          const lane = k & 3;
          lanes[lane] = Math.fround(lanes[lane]! + Math.fround(av[i * n + k]! * bv[k * n + j]!));
        }
        const low = Math.fround(lanes[0]! + lanes[1]!);
        out[i * n + j] = Math.fround(Math.fround(low + lanes[2]!) + lanes[3]!);
      }
    }
  }
  return { n, data: out };
}

/** C = A * B in float64 on flat row-major arrays, ascending k. */
export function matmulNaiveF64(a: Float64Array, b: Float64Array, n: number): Float64Array {
  const out = new Float64Array(n * n);
  for (let i = 0; i < n; i += 1) {
    for (let j = 0; j < n; j += 1) {
      let acc = 0;
      for (let k = 0; k < n; k += 1) {
        acc += a[i * n + k]! * b[k * n + j]!;
      }
      out[i * n + j] = acc;
    }
  }
  return out;
}

/** A^power in float64 by repeated multiplication (power >= 1). */
export function repeatedPowerF64(a: Float64Array, n: number, power: number): Float64Array {
  if (!Number.isInteger(power) || power < 1) {
    throw new ValidationError(`power must be an integer >= 1, got ${power}`);
  }
  let acc: Float64Array = Float64Array.from(a);
  for (let step = 1; step < power; step += 1) {
    acc = matmulNaiveF64(acc, a, n);
  }
  return acc;
}

export interface ErrorMetrics {
  readonly maxAbs: number;
  /** maxAbs over the largest-magnitude reference element; an exactly
   * matched all-zero reference yields 0, a mismatched one Infinity. */
  readonly maxRel: number;
}

/** Error of `result` against `reference`, computed in float64. */
export function compareToReference(
  result: ArrayLike<number>,
  reference: ArrayLike<number>,
): ErrorMetrics {
  if (result.length !== reference.length) {
    throw new ValidationError(
      `element counts differ: ${result.length} vs ${reference.length}`,
    );
  }
  let maxAbs = 0;
  let denom = 0;
  for (let k = 0; k < result.length; k += 1) {
    const diff = Math.abs(result[k]! - reference[k]!);
    if (Number.isNaN(diff)) {
      return { maxAbs: Number.NaN, maxRel: Number.NaN };
    }
    if (diff > maxAbs) maxAbs = diff;
    const mag = Math.abs(reference[k]!);
    if (mag > denom) denom = mag;
  }
  if (denom === 0) {
    return { maxAbs, maxRel: maxAbs === 0 ? 0 : Number.POSITIVE_INFINITY };
  }
  return { maxAbs, maxRel: maxAbs / denom };
}
