/**
 * Traffic reports in the simulator's stable serialization: seven counters
 * as `key=value` lines or one CSV row under a fixed header.  Unknown keys
 * in key=value input are ignored (the producer may append diagnostics);
 * missing required fields are an error.
 *
 * `predictTraffic` gives the closed-form counts for the phased tiled
 * kernel, used to cross-check reports parsed from the simulator CLI.
 */

import { ValidationError } from "./errors.js";
import type { TileShape } from "./tiles.js";
import { checkDivisibility } from "./tiles.js";

export const TRAFFIC_FIELDS = [
  "global_loads",
  "global_stores",
  "local_loads",
  "local_stores",
  "barriers_executed",
  "coalesced",
  "worst_stride_elements",
] as const;

export interface TrafficReport {
  readonly globalLoads: number;
  readonly globalStores: number;
  readonly localLoads: number;
  readonly localStores: number;
  readonly barriersExecuted: number;
  readonly coalesced: boolean;
  readonly worstStrideElements: number;
}

function buildReport(pairs: Map<string, string>, source: string): TrafficReport {
  const missing = TRAFFIC_FIELDS.filter((f) => !pairs.has(f));
  if (missing.length > 0) {
    throw new ValidationError(`missing TrafficReport fields in ${source}: ${missing.join(", ")}`);
  }
  const asCount = (key: string): number => {
    const raw = pairs.get(key)!;
    const v = Number(raw);
    if (!Number.isInteger(v) || v < 0) {
      throw new ValidationError(`field ${key} must be a non-negative integer, got ${raw}`);
    }
    return v;
  };
  return {
    globalLoads: asCount("global_loads"),
    globalStores: asCount("global_stores"),
    localLoads: asCount("local_loads"),
    localStores: asCount("local_stores"),
    barriersExecuted: asCount("barriers_executed"),
    coalesced: pairs.get("coalesced") === "true",
    worstStrideElements: asCount("worst_stride_elements"),
  };
}

/** Parse `key=value` lines; unknown keys are ignored. */
export function parseTrafficKv(text: string): TrafficReport {
  const pairs = new Map<string, string>();
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (trimmed.length === 0) continue;
    const eq = trimmed.indexOf("=");
    if (eq < 0) continue;
    pairs.set(trimmed.slice(0, eq).trim(), trimmed.slice(eq + 1).trim());
  }
  return buildReport(pairs, "key=value text");
}

/** The fixed CSV header. */
export function trafficCsvHeader(): string {
  return TRAFFIC_FIELDS.join(",");
}

/** Parse a CSV document of header line plus one data row. */
export function parseTrafficCsv(text: string): TrafficReport {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length !== 2) {
    throw new ValidationError(`expected header plus one row, got ${lines.length} lines`);
  }
  const header = lines[0]!.trim();
  if (header !== trafficCsvHeader()) {
    throw new ValidationError(`unexpected CSV header: ${header}`);
  }
  const cells = lines[1]!.trim().split(",");
  if (cells.length !== TRAFFIC_FIELDS.length) {
    throw new ValidationError(`expected ${TRAFFIC_FIELDS.length} cells, got ${cells.length}`);
  }
  const pairs = new Map<string, string>();
  TRAFFIC_FIELDS.forEach((field, idx) => pairs.set(field, cells[idx]!.trim()));
  return buildReport(pairs, "CSV row");
}

export interface TrafficPrediction {
  readonly globalLoads: number;
  readonly globalStores: number;
  readonly localLoads: number;
  readonly localStores: number;
  readonly barriersExecuted: number;
}

/**
 * Closed-form traffic of the phased tiled kernel on an n x n problem.
 *
 * With G = (n/rows)(n/cols) groups, P = n/cols phases, and S = rows*cols +
 * cols*cols elements staged per group-phase: every staged element is one
 * global load and one local store, every output element is one global
 * store, each of the 2n^3 operand reads during accumulation is a local
 * load, and each phase executes two barriers per group.
 */
export function predictTraffic(n: number, tile: TileShape): TrafficPrediction {
  checkDivisibility(n, tile);
  const groups = (n / tile.rows) * (n / tile.cols);
  const phases = n / tile.cols;
  const staged = tile.rows * tile.cols + tile.cols * tile.cols;
  return {
    globalLoads: groups * phases * staged,
    globalStores: n * n,
    localLoads: 2 * n ** 3,
    localStores: groups * phases * staged,
    barriersExecuted: 2 * groups * phases,
  };
}
