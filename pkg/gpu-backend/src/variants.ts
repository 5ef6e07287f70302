/**
 * Kernel variants: one compiled configuration of the tiled matmul source.
 *
 * Tile geometry, vector width, and unroll factor are compile-time defines —
 * a different tile is a different kernel build, never a runtime branch.
 * The build-options string format
 * `-D TILE_R=16 -D TILE_C=16 -D VW=4 -D UNROLL=8` is a stable interface,
 * as is addressing kernel sources by `sourceId` (a plain-text file name
 * under `kernels/`).
 */

import { readFileSync } from "node:fs";

import { ValidationError } from "./errors.js";
import type { TileShape, UnrollFactor, VectorWidth } from "./tiles.js";
import {
  TILE_MENU,
  UNROLL_FACTORS,
  VECTOR_WIDTHS,
  isMenuTile,
  tileLabel,
} from "./tiles.js";

export interface KernelVariant {
  readonly tile: TileShape;
  readonly vectorWidth: VectorWidth;
  readonly unroll: UnrollFactor;
  /** File name of the kernel source under `kernels/`. */
  readonly sourceId: string;
  /** Compile-time defines handed to the device compiler. */
  readonly buildOptions: string;
}

export const MATMUL_SOURCE_ID = "matmul_tiled.cl";

/** Render the stable build-options define string for one configuration. */
export function buildOptions(tile: TileShape, vectorWidth: number, unroll: number): string {
  return `-D TILE_R=${tile.rows} -D TILE_C=${tile.cols} -D VW=${vectorWidth} -D UNROLL=${unroll}`;
}

/** Construct a variant of the tiled matmul kernel, validating the menu. */
export function makeVariant(
  tile: TileShape,
  vectorWidth: VectorWidth = 1,
  unroll: UnrollFactor = 1,
): KernelVariant {
  if (!isMenuTile(tile.rows, tile.cols)) {
    throw new ValidationError(
      `tile ${tile.rows}x${tile.cols} is not on the menu: ` +
        TILE_MENU.map((t) => `${t.rows}x${t.cols}`).join(", "),
    );
  }
  if (!VECTOR_WIDTHS.includes(vectorWidth)) {
    throw new ValidationError(`vector width must be one of ${VECTOR_WIDTHS.join(", ")}`);
  }
  if (!UNROLL_FACTORS.includes(unroll)) {
    throw new ValidationError(`unroll factor must be one of ${UNROLL_FACTORS.join(", ")}`);
  }
  if (vectorWidth === 4 && tile.cols % 4 !== 0) {
    throw new ValidationError(
      `vector width 4 needs tile cols divisible by 4, got ${tile.cols}`,
    );
  }
  return {
    tile: { rows: tile.rows, cols: tile.cols },
    vectorWidth,
    unroll,
    sourceId: MATMUL_SOURCE_ID,
    buildOptions: buildOptions(tile, vectorWidth, unroll),
  };
}

/** One canonical variant per menu tile, keyed "RxC" (scalar, no unroll). */
export const VARIANT_MENU: ReadonlyMap<string, KernelVariant> = new Map(
  TILE_MENU.map((tile) => [`${tile.rows}x${tile.cols}`, makeVariant(tile)]),
);

/** Look up the canonical variant for a menu tile. */
export function menuVariant(rows: number, cols: number): KernelVariant {
  const found = VARIANT_MENU.get(`${rows}x${cols}`);
  if (found === undefined) {
    throw new ValidationError(`no kernel variant for tile ${rows}x${cols}`);
  }
  return found;
}

/** Short name for logs and backend registration, e.g. "gpu-16x8-vw4-u8". */
export function variantName(variant: KernelVariant): string {
  return `gpu-${tileLabel(variant.tile, variant.vectorWidth, variant.unroll)}`;
}

/**
 * Load a kernel source by its stable id.  Sources are plain-text files in
 * this package's `kernels/` directory; ids are bare file names.
 */
export function loadKernelSource(sourceId: string): string {
  if (!/^[A-Za-z0-9_.-]+$/.test(sourceId) || sourceId.includes("..")) {
    throw new ValidationError(`invalid kernel source id: ${JSON.stringify(sourceId)}`);
  }
  const url = new URL(`../kernels/${sourceId}`, import.meta.url);
  try {
    return readFileSync(url, "utf8");
  } catch {
    throw new ValidationError(`kernel source not found: ${sourceId}`);
  }
}
