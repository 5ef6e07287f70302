/**
 * In-process `ComputeDevice` that interprets the tiled matmul kernel, so
 * conformance tests run without hardware.
 *
 * `compile` consumes the same inputs a driver would — source text plus the
 * `-D` define string — and enforces the source's preprocessor constraints,
 * reporting failures through a build log.  `dispatchMatmul` replays the
 * kernel's data flow per work-group: stage the A and B blocks to local
 * memory each phase, then accumulate from local memory in ascending k,
 * every multiply and add rounded to float32 (the emulator does not fuse).
 * Vector width 4 keeps four lane sums folded left-to-right at the end.
 */

import type { CompiledKernel, ComputeDevice, DeviceBuffer } from "./device.js";
import { CompileError, ValidationError } from "./errors.js";

const KERNEL_ENTRY = "__kernel void matmul_tiled";

interface EmulatedBuffer extends DeviceBuffer {
  readonly data: Float32Array;
  released: boolean;
}

interface EmulatedKernel extends CompiledKernel {
  readonly tileRows: number;
  readonly tileCols: number;
  readonly vectorWidth: number;
  readonly unroll: number;
}

function parseDefines(options: string): Map<string, number> {
  const defines = new Map<string, number>();
  const pattern = /-D\s+([A-Za-z_]\w*)=(-?\d+)/g;
  for (const match of options.matchAll(pattern)) {
    defines.set(match[1]!, Number(match[2]!));
  }
  return defines;
}

export class EmulatedDevice implements ComputeDevice {
  readonly name = "emulated-opencl";
  readonly localMemBytes: number;

  constructor(localMemBytes = 49152) {
    if (!Number.isInteger(localMemBytes) || localMemBytes < 1) {
      throw new ValidationError(`local memory size must be positive, got ${localMemBytes}`);
    }
    this.localMemBytes = localMemBytes;
  }

  compile(sourceId: string, source: string, options: string): CompiledKernel {
    const fail = (log: string): never => {
      throw new CompileError(`build of ${sourceId} failed`, log);
    };
    if (!source.includes(KERNEL_ENTRY)) {
      fail(`error: entry point '${KERNEL_ENTRY}' not found in ${sourceId}`);
    }
    const defines = parseDefines(options);
    for (const key of ["TILE_R", "TILE_C", "VW", "UNROLL"]) {
      if (!defines.has(key)) {
        fail(`error: missing compile-time define ${key} in options '${options}'`);
      }
    }
    const tileRows = defines.get("TILE_R")!;
    const tileCols = defines.get("TILE_C")!;
    const vectorWidth = defines.get("VW")!;
    const unroll = defines.get("UNROLL")!;
    if (tileRows < 1 || tileCols < 1) {
      fail(`error: tile dimensions must be positive, got ${tileRows}x${tileCols}`);
    }
    if (vectorWidth !== 1 && vectorWidth !== 4) {
      fail('error: #error "VW must be 1 or 4"');
    }
    if (vectorWidth === 4 && tileCols % 4 !== 0) {
      fail('error: #error "VW=4 requires TILE_C divisible by 4"');
    }
    const localBytes = (tileRows * tileCols + tileCols * tileCols) * 4;
    if (localBytes > this.localMemBytes) {
      fail(
        `error: kernel requires ${localBytes} bytes of local memory, ` +
          `device provides ${this.localMemBytes}`,
      );
    }
    const kernel: EmulatedKernel = {
      sourceId,
      buildOptions: options,
      tileRows,
      tileCols,
      vectorWidth,
      unroll,
    };
    return kernel;
  }

  createBuffer(byteLength: number): DeviceBuffer {
    if (!Number.isInteger(byteLength) || byteLength < 4 || byteLength % 4 !== 0) {
      throw new ValidationError(`buffer size must be a positive multiple of 4, got ${byteLength}`);
    }
    const buffer: EmulatedBuffer = {
      byteLength,
      data: new Float32Array(byteLength / 4),
      released: false,
    };
    return buffer;
  }

  private own(buffer: DeviceBuffer, role: string): EmulatedBuffer {
    const emulated = buffer as EmulatedBuffer;
    if (!(emulated.data instanceof Float32Array)) {
      throw new ValidationError(`${role} buffer does not belong to this device`);
    }
    if (emulated.released) {
      throw new ValidationError(`${role} buffer was already released`);
    }
    return emulated;
  }

  writeBuffer(dst: DeviceBuffer, data: Float32Array): void {
    const buffer = this.own(dst, "destination");
    if (data.length !== buffer.data.length) {
      throw new ValidationError(
        `write of ${data.length} elements into buffer of ${buffer.data.length}`,
      );
    }
    buffer.data.set(data);
  }

  readBuffer(src: DeviceBuffer, dst: Float32Array): void {
    const buffer = this.own(src, "source");
    if (dst.length !== buffer.data.length) {
      throw new ValidationError(
        `read of ${buffer.data.length} elements into array of ${dst.length}`,
      );
    }
    dst.set(buffer.data);
  }

  dispatchMatmul(
    kernel: CompiledKernel,
    n: number,
    a: DeviceBuffer,
    b: DeviceBuffer,
    c: DeviceBuffer,
  ): void {
    const k = kernel as EmulatedKernel;
    if (typeof k.tileRows !== "number") {
      throw new ValidationError("kernel was not compiled by this device");
    }
    if (!Number.isInteger(n) || n < 1 || n % k.tileRows !== 0 || n % k.tileCols !== 0) {
      throw new ValidationError(`global size ${n} does not split into ${k.tileRows}x${k.tileCols} groups`);
    }
    const av = this.own(a, "a").data;
    const bv = this.own(b, "b").data;
    const cv = this.own(c, "c").data;
    if (av.length < n * n || bv.length < n * n || cv.length < n * n) {
      throw new ValidationError(`buffers too small for an ${n}x${n} launch`);
    }
    runTiledMatmul(k, n, av, bv, cv);
  }

  releaseBuffer(buffer: DeviceBuffer): void {
    this.own(buffer, "released").released = true;
  }
}

function runTiledMatmul(
  kernel: EmulatedKernel,
  n: number,
  a: Float32Array,
  b: Float32Array,
  c: Float32Array,
): void {
  const { tileRows: R, tileCols: C, vectorWidth } = kernel;
  const phases = n / C;
  const la = new Float32Array(R * C);
  const lb = new Float32Array(C * C);
  // Lane sums per output element of the group (vector width 4 uses all
  // four; scalar kernels accumulate in lane 0).
  const lanes = new Float32Array(R * C * 4);

  for (let groupRow0 = 0; groupRow0 < n; groupRow0 += R) {
    for (let groupCol0 = 0; groupCol0 < n; groupCol0 += C) {
      lanes.fill(0);
      for (let p = 0; p < phases; p += 1) {
        const k0 = p * C;
        for (let lr = 0; lr < R; lr += 1) {
          for (let lc = 0; lc < C; lc += 1) {
            la[lr * C + lc] = a[(groupRow0 + lr) * n + (k0 + lc)]!;
          }
        }
        for (let s = 0; s < C * C; s += 1) {
          const br = Math.floor(s / C);
          const bc = s % C;
          lb[s] = b[(k0 + br) * n + (groupCol0 + bc)]!;
        }
        // barrier(CLK_LOCAL_MEM_FENCE): staging complete before reads.
        for (let lr = 0; lr < R; lr += 1) {
          for (let lc = 0; lc < C; lc += 1) {
            const base = (lr * C + lc) * 4;
            if (vectorWidth === 1) {
              let acc = lanes[base]!;
              for (let kk = 0; kk < C; kk += 1) {
                acc = Math.fround(acc + Math.fround(la[lr * C + kk]! * lb[kk * C + lc]!));
              }
              lanes[base] = acc;
            } else {
              for (let kk = 0; kk < C; kk += 1) {
                const lane = base + (kk & 3);
                lanes[lane] = Math.fround(
                  lanes[lane]! + Math.fround(la[lr * C + kk]! * lb[kk * C + lc]!),
                );
              }
            }
          }
        }
        // barrier(CLK_LOCAL_MEM_FENCE): reads complete before restaging.
      }
      for (let lr = 0; lr < R; lr += 1) {
        for (let lc = 0; lc < C; lc += 1) {
          const base = (lr * C + lc) * 4;
          const out =
            vectorWidth === 1
              ? lanes[base]!
              : Math.fround(
                  Math.fround(Math.fround(lanes[base]! + lanes[base + 1]!) + lanes[base + 2]!) +
                    lanes[base + 3]!,
                );
          c[(groupRow0 + lr) * n + (groupCol0 + lc)] = out;
        }
      }
    }
  }
}
