/**
 * Dense square matrices in flat row-major storage: element (i, j) of an
 * n x n matrix lives at index `i * n + j`.
 *
 * The device path works in float32 (`MatrixF32`).  File I/O and the
 * deterministic generator also handle float64 through `HostMatrix`, which
 * carries an explicit dtype tag matching the text-format header.
 */

import { ValidationError } from "./errors.js";
import { uniformDoubles } from "./prng.js";

export type DTypeName = "f32" | "f64";

export interface MatrixF32 {
  readonly n: number;
  /** Row-major elements, length n * n. */
  readonly data: Float32Array;
}

export interface HostMatrix {
  readonly n: number;
  readonly dtype: DTypeName;
  readonly data: Float32Array | Float64Array;
}

function checkOrder(n: number): void {
  if (!Number.isInteger(n) || n < 1) {
    throw new ValidationError(`matrix order must be a positive integer, got ${n}`);
  }
}

/** Wrap (copying) or allocate a float32 matrix of order n. */
export function matrixF32(n: number, data?: ArrayLike<number>): MatrixF32 {
  checkOrder(n);
  if (data === undefined) {
    return { n, data: new Float32Array(n * n) };
  }
  if (data.length !== n * n) {
    throw new ValidationError(`expected ${n * n} elements for order ${n}, got ${data.length}`);
  }
  return { n, data: Float32Array.from(data) };
}

/** The n x n multiplicative unit in float32. */
export function identityF32(n: number): MatrixF32 {
  checkOrder(n);
  const data = new Float32Array(n * n);
  for (let i = 0; i < n; i += 1) {
    data[i * n + i] = 1;
  }
  return { n, data };
}

/** Build a float32 matrix from nested rows (must be square). */
export function fromRowsF32(rows: readonly (readonly number[])[]): MatrixF32 {
  const n = rows.length;
  checkOrder(n);
  const data = new Float32Array(n * n);
  for (let i = 0; i < n; i += 1) {
    const row = rows[i]!;
    if (row.length !== n) {
      throw new ValidationError(`row ${i} has ${row.length} values, expected ${n}`);
    }
    for (let j = 0; j < n; j += 1) {
      data[i * n + j] = Math.fround(row[j]!);
    }
  }
  return { n, data };
}

/** Narrow a host matrix to the float32 device format (f64 values round). */
export function toF32(m: HostMatrix): MatrixF32 {
  return { n: m.n, data: Float32Array.from(m.data, Math.fround) };
}

function bitsToF64(bits: bigint): number {
  const view = new DataView(new ArrayBuffer(8));
  view.setBigUint64(0, bits);
  return view.getFloat64(0);
}

function f64ToBits(value: number): bigint {
  const view = new DataView(new ArrayBuffer(8));
  view.setFloat64(0, value);
  return view.getBigUint64(0);
}

/** The float64 neighbor of `from` one ulp toward `to` (IEEE nextafter). */
export function nextAfterF64(from: number, to: number): number {
  if (Number.isNaN(from) || Number.isNaN(to)) return Number.NaN;
  if (from === to) return to;
  if (from === 0) return to > 0 ? Number.MIN_VALUE : -Number.MIN_VALUE;
  const bits = f64ToBits(from);
  const towardLarger = to > from === from > 0;
  return bitsToF64(towardLarger ? bits + 1n : bits - 1n);
}

function bitsToF32(bits: number): number {
  const view = new DataView(new ArrayBuffer(4));
  view.setUint32(0, bits >>> 0);
  return view.getFloat32(0);
}

function f32ToBits(value: number): number {
  const view = new DataView(new ArrayBuffer(4));
  view.setFloat32(0, value);
  return view.getUint32(0);
}

/** The float32 neighbor of `from` one ulp toward `to`. */
export function nextAfterF32(from: number, to: number): number {
  const f = Math.fround(from);
  if (Number.isNaN(f) || Number.isNaN(to)) return Number.NaN;
  if (f === to) return Math.fround(to);
  if (f === 0) return to > 0 ? bitsToF32(1) : bitsToF32(0x80000001);
  const bits = f32ToBits(f);
  const towardLarger = to > f === f > 0;
  return bitsToF32(towardLarger ? bits + 1 : bits - 1);
}

/**
 * Deterministic uniform matrix in [lo, hi), identical across platforms and
 * languages.  Elements are drawn row-major from SplitMix64; narrowing to
 * float32 can round a value up onto `hi`, and such values are pulled back
 * one ulp to keep the interval half-open.
 */
export function randomMatrix(
  n: number,
  dtype: DTypeName = "f64",
  seed: bigint | number = 0,
  lo = -0.5,
  hi = 0.5,
): HostMatrix {
  checkOrder(n);
  if (!(lo < hi)) {
    throw new ValidationError(`need lo < hi, got [${lo}, ${hi})`);
  }
  const u = uniformDoubles(seed, n * n);
  if (dtype === "f64") {
    const data = new Float64Array(n * n);
    for (let k = 0; k < n * n; k += 1) {
      const v = lo + u[k]! * (hi - lo);
      data[k] = v >= hi ? nextAfterF64(hi, lo) : v;
    }
    return { n, dtype, data };
  }
  const data = new Float32Array(n * n);
  const hi32 = Math.fround(hi);
  for (let k = 0; k < n * n; k += 1) {
    const v = Math.fround(lo + u[k]! * (hi - lo));
    data[k] = v >= hi32 ? nextAfterF32(hi32, lo) : v;
  }
  return { n, dtype, data };
}
