/**
 * Tile geometry: the fixed menu of work-group shapes, the local-memory
 * footprint each shape stages, and the divisibility rule that makes a
 * launch legal.
 *
 * A `rows x cols` tile covers a `rows x cols` block of the output.  Per
 * phase the group stages a `rows x cols` block of A plus a `cols x cols`
 * block of B into local memory, so the staged footprint is
 * `(rows*cols + cols*cols) * bytesPerElement`.
 */

import { ValidationError } from "./errors.js";

export interface TileShape {
  readonly rows: number;
  readonly cols: number;
}

/** Work-group shapes with a kernel variant; anything else is rejected. */
export const TILE_MENU: readonly TileShape[] = [
  { rows: 4, cols: 4 },
  { rows: 4, cols: 8 },
  { rows: 8, cols: 8 },
  { rows: 16, cols: 8 },
  { rows: 8, cols: 16 },
  { rows: 16, cols: 16 },
];

export const VECTOR_WIDTHS = [1, 4] as const;
export const UNROLL_FACTORS = [1, 4, 8, 16] as const;

export type VectorWidth = (typeof VECTOR_WIDTHS)[number];
export type UnrollFactor = (typeof UNROLL_FACTORS)[number];

/** Whether `rows x cols` is one of the menu shapes. */
export function isMenuTile(rows: number, cols: number): boolean {
  return TILE_MENU.some((t) => t.rows === rows && t.cols === cols);
}

/** Short configuration label, e.g. "16x8-vw4-u8". */
export function tileLabel(tile: TileShape, vectorWidth: number, unroll: number): string {
  return `${tile.rows}x${tile.cols}-vw${vectorWidth}-u${unroll}`;
}

/** Local-memory bytes one work-group stages per phase (A block + B block). */
export function stagedFootprintBytes(tile: TileShape, bytesPerElement = 4): number {
  return (tile.rows * tile.cols + tile.cols * tile.cols) * bytesPerElement;
}

/** A launch needs the matrix order to split evenly into tiles and phases. */
export function checkDivisibility(n: number, tile: TileShape): void {
  if (!Number.isInteger(n) || n < 1) {
    throw new ValidationError(`matrix order must be a positive integer, got ${n}`);
  }
  if (n % tile.rows !== 0 || n % tile.cols !== 0) {
    throw new ValidationError(
      `matrix order ${n} is not divisible by tile ${tile.rows}x${tile.cols}`,
    );
  }
}
