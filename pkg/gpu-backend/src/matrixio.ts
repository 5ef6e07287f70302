/**
 * Plain-text square-matrix format shared with the CPU-side tooling.
 *
 * Line 1 is `<n> <dtype>` with dtype in {f32, f64}; then n lines of n
 * decimal values each, row-major, written with shortest round-trip
 * precision.  Non-finite values are spelled `inf`, `-inf`, and `nan`.
 * Reading parses each token as a double and then rounds to the declared
 * dtype, so a file written by either side reproduces the same elements
 * bit-for-bit on both.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { ValidationError } from "./errors.js";
import type { DTypeName, HostMatrix } from "./matrix.js";

function formatValue(v: number): string {
  if (Number.isNaN(v)) return "nan";
  if (v === Number.POSITIVE_INFINITY) return "inf";
  if (v === Number.NEGATIVE_INFINITY) return "-inf";
  return v.toString();
}

function parseValue(token: string): number {
  switch (token) {
    case "inf":
    case "Infinity":
      return Number.POSITIVE_INFINITY;
    case "-inf":
    case "-Infinity":
      return Number.NEGATIVE_INFINITY;
    case "nan":
    case "-nan":
      return Number.NaN;
    default: {
      const v = Number(token);
      if (Number.isNaN(v)) {
        throw new ValidationError(`not a numeric token: ${JSON.stringify(token)}`);
      }
      return v;
    }
  }
}

/** Serialize a matrix to the text format. */
export function formatMatrixText(m: HostMatrix): string {
  const lines = [`${m.n} ${m.dtype}`];
  for (let i = 0; i < m.n; i += 1) {
    const row: string[] = [];
    for (let j = 0; j < m.n; j += 1) {
      row.push(formatValue(m.data[i * m.n + j]!));
    }
    lines.push(row.join(" "));
  }
  return lines.join("\n") + "\n";
}

/** Parse the text format into a matrix of the declared dtype. */
export function parseMatrixText(text: string): HostMatrix {
  const lines = text.split("\n");
  const header = (lines[0] ?? "").trim().split(/\s+/);
  if (header.length !== 2) {
    throw new ValidationError("matrix file header must be '<n> <dtype>'");
  }
  const n = Number(header[0]);
  const dtype = header[1];
  if (!Number.isInteger(n) || n < 1) {
    throw new ValidationError(`matrix order must be a positive integer, got ${header[0]}`);
  }
  if (dtype !== "f32" && dtype !== "f64") {
    throw new ValidationError(`unknown dtype ${JSON.stringify(dtype)}`);
  }
  const data = dtype === "f32" ? new Float32Array(n * n) : new Float64Array(n * n);
  for (let i = 0; i < n; i += 1) {
    const line = lines[i + 1];
    const parts = line === undefined ? [] : line.trim().split(/\s+/).filter((t) => t.length > 0);
    if (parts.length !== n) {
      throw new ValidationError(`row ${i} has ${parts.length} values, expected ${n}`);
    }
    for (let j = 0; j < n; j += 1) {
      const v = parseValue(parts[j]!);
      data[i * n + j] = dtype === "f32" ? Math.fround(v) : v;
    }
  }
  return { n, dtype: dtype as DTypeName, data };
}

/** Write a matrix file at `path`. */
export function writeMatrixFile(m: HostMatrix, path: string): void {
  writeFileSync(path, formatMatrixText(m), "utf8");
}

/** Read a matrix file from `path`. */
export function readMatrixFile(path: string): HostMatrix {
  return parseMatrixText(readFileSync(path, "utf8"));
}
