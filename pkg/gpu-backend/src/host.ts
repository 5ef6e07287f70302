/**
 * Host shim: validates a launch, compiles the requested kernel variant,
 * and drives the device.
 *
 * Every check that can fail on the host — shape, divisibility, and the
 * local-memory budget against the device's reported size — runs before
 * the kernel source is even handed to the device compiler.
 *
 * `gpuExponentiate` raises a matrix to an integer power with the
 * square-and-multiply plan executed entirely on the device: one upload of
 * the base, ping-pong work buffers for the plan steps, one readback of
 * the result.  The returned transfer count is exactly 2 for every power.
 */

import type { ComputeDevice, DeviceBuffer } from "./device.js";
import { BudgetError, ValidationError } from "./errors.js";
import type { MatrixF32 } from "./matrix.js";
import { checkDivisibility, stagedFootprintBytes } from "./tiles.js";
import type { KernelVariant } from "./variants.js";
import { loadKernelSource, variantName } from "./variants.js";

export type PlanStep = "SQUARE" | "MULTIPLY";

/**
 * Square-and-multiply schedule for A^power, power >= 1.  Scanning the
 * exponent's bits from second-highest to lowest: square the accumulator,
 * then multiply by the base when the bit is set.
 */
export function planExponentiation(power: number): PlanStep[] {
  if (!Number.isInteger(power) || power < 1) {
    throw new ValidationError(`power must be an integer >= 1, got ${power}`);
  }
  const steps: PlanStep[] = [];
  for (let bit = 31 - Math.clz32(power) - 1; bit >= 0; bit -= 1) {
    steps.push("SQUARE");
    if ((power >>> bit) & 1) {
      steps.push("MULTIPLY");
    }
  }
  return steps;
}

/** Multiplies the plan performs: floor(log2 power) + popcount(power) - 1. */
export function multiplyCountFor(power: number): number {
  return planExponentiation(power).length;
}

function checkLaunch(device: ComputeDevice, n: number, variant: KernelVariant): void {
  checkDivisibility(n, variant.tile);
  const footprint = stagedFootprintBytes(variant.tile);
  if (footprint > device.localMemBytes) {
    throw new BudgetError(
      `tile ${variant.tile.rows}x${variant.tile.cols} stages ${footprint} bytes, ` +
        `device ${device.name} provides ${device.localMemBytes}`,
      footprint,
      device.localMemBytes,
    );
  }
}

function compileVariant(device: ComputeDevice, variant: KernelVariant) {
  const source = loadKernelSource(variant.sourceId);
  return device.compile(variant.sourceId, source, variant.buildOptions);
}

/** C = A * B on the device through one kernel variant. */
export function gpuMatmul(
  device: ComputeDevice,
  a: MatrixF32,
  b: MatrixF32,
  variant: KernelVariant,
): MatrixF32 {
  if (a.n !== b.n) {
    throw new ValidationError(`matrix orders differ: ${a.n} vs ${b.n}`);
  }
  const n = a.n;
  checkLaunch(device, n, variant);
  const kernel = compileVariant(device, variant);
  const bytes = n * n * 4;
  const bufA = device.createBuffer(bytes);
  const bufB = device.createBuffer(bytes);
  const bufC = device.createBuffer(bytes);
  try {
    device.writeBuffer(bufA, a.data);
    device.writeBuffer(bufB, b.data);
    device.dispatchMatmul(kernel, n, bufA, bufB, bufC);
    const out = new Float32Array(n * n);
    device.readBuffer(bufC, out);
    return { n, data: out };
  } finally {
    device.releaseBuffer(bufA);
    device.releaseBuffer(bufB);
    device.releaseBuffer(bufC);
  }
}

export interface ExponentiateOutcome {
  readonly result: MatrixF32;
  /** Host-device matrix transfers performed; 2 by construction. */
  readonly transferCount: number;
  /** Kernel launches the plan executed. */
  readonly multiplyCount: number;
}

/** A^power on the device: upload once, run the plan on-device, read once. */
export function gpuExponentiate(
  device: ComputeDevice,
  a: MatrixF32,
  power: number,
  variant: KernelVariant,
): ExponentiateOutcome {
  const steps = planExponentiation(power);
  const n = a.n;
  checkLaunch(device, n, variant);
  const kernel = compileVariant(device, variant);
  const bytes = n * n * 4;
  const base = device.createBuffer(bytes);
  const ping = device.createBuffer(bytes);
  const pong = device.createBuffer(bytes);
  let transfers = 0;
  try {
    device.writeBuffer(base, a.data);
    transfers += 1;
    // The accumulator starts as the base; work buffers alternate so the
    // base stays intact for MULTIPLY steps.
    let src = base;
    for (const step of steps) {
      const dst: DeviceBuffer = src === ping ? pong : ping;
      device.dispatchMatmul(kernel, n, src, step === "SQUARE" ? src : base, dst);
      src = dst;
    }
    const out = new Float32Array(n * n);
    device.readBuffer(src, out);
    transfers += 1;
    return { result: { n, data: out }, transferCount: transfers, multiplyCount: steps.length };
  } finally {
    device.releaseBuffer(base);
    device.releaseBuffer(ping);
    device.releaseBuffer(pong);
  }
}

export interface GpuBackendHandle {
  readonly name: string;
  multiply(a: MatrixF32, b: MatrixF32): MatrixF32;
}

/**
 * Package one device and variant as a named multiply callback, the shape
 * an exponentiation engine expects of a pluggable backend.
 */
export function asBackend(device: ComputeDevice, variant: KernelVariant): GpuBackendHandle {
  return {
    name: variantName(variant),
    multiply: (a, b) => gpuMatmul(device, a, b, variant),
  };
}
