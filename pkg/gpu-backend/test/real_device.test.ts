/**
 * Real-hardware conformance: identical assertions to the emulator-backed
 * suite, run against a physical device when one is attached.
 *
 * Attaching a device means implementing `ComputeDevice` over your
 * platform's OpenCL bindings and returning it from `detectRealDevice`,
 * then setting GPU_BACKEND_DEVICE=1.  Without that, every test here is
 * skipped — never failed — and the rest of the suite is unaffected.
 */

import { describe, expect, it } from "vitest";

import type { ComputeDevice } from "../src/device.js";
import { TransferCountingDevice } from "../src/device.js";
import { gpuExponentiate, gpuMatmul } from "../src/host.js";
import { compareToReference, deviceTol, matmulNaiveF32 } from "../src/reference.js";
import { TILE_MENU } from "../src/tiles.js";
import { makeVariant, menuVariant } from "../src/variants.js";
import { randomF32, wellConditionedF32 } from "./helpers.js";

function detectRealDevice(): ComputeDevice | null {
  if (process.env["GPU_BACKEND_DEVICE"] !== "1") {
    return null;
  }
  // No OpenCL host bindings ship with this package; wire yours in here.
  return null;
}

const device = detectRealDevice();

describe("real-device conformance", () => {
  it.skipIf(device === null)("matches the CPU oracle for every menu variant", () => {
    for (const n of [64, 128]) {
      const a = randomF32(n, 1000 + n);
      const b = randomF32(n, 2000 + n);
      const naive = matmulNaiveF32(a, b);
      for (const tile of TILE_MENU) {
        for (const vw of [1, 4] as const) {
          const result = gpuMatmul(device!, a, b, makeVariant(tile, vw, vw === 4 ? 8 : 1));
          expect(compareToReference(result.data, naive.data).maxRel).toBeLessThanOrEqual(
            deviceTol(n),
          );
        }
      }
    }
  });

  it.skipIf(device === null)("performs exactly two transfers for N=1024", () => {
    const counting = new TransferCountingDevice(device!);
    const outcome = gpuExponentiate(counting, wellConditionedF32(64, 1), 1024, menuVariant(16, 16));
    expect(outcome.transferCount).toBe(2);
    expect(counting.hostToDevice).toBe(1);
    expect(counting.deviceToHost).toBe(1);
  });
});
