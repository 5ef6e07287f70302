/**
 * The minimal device contract the host shim drives.  A real OpenCL
 * adapter and the in-process emulator both implement `ComputeDevice`;
 * everything above this interface is device-agnostic.
 *
 * One shim instance owns one command queue: launches through a single
 * device object are serialized in call order, and instances must not be
 * shared across concurrent exponentiations.
 */

export interface DeviceBuffer {
  readonly byteLength: number;
}

export interface CompiledKernel {
  readonly sourceId: string;
  readonly buildOptions: string;
}

export interface ComputeDevice {
  readonly name: string;
  /** Local (work-group) memory available to one group, in bytes. */
  readonly localMemBytes: number;
  /** Build a kernel from plain source text plus compile-time defines. */
  compile(sourceId: string, source: string, options: string): CompiledKernel;
  createBuffer(byteLength: number): DeviceBuffer;
  /** Host to device. */
  writeBuffer(dst: DeviceBuffer, data: Float32Array): void;
  /** Device to host. */
  readBuffer(src: DeviceBuffer, dst: Float32Array): void;
  /** Launch the tiled matmul over an n x n problem: c = a * b. */
  dispatchMatmul(
    kernel: CompiledKernel,
    n: number,
    a: DeviceBuffer,
    b: DeviceBuffer,
    c: DeviceBuffer,
  ): void;
  releaseBuffer(buffer: DeviceBuffer): void;
}

/**
 * Pass-through wrapper that counts host-device matrix transfers in each
 * direction, for verifying the shim's transfer behavior from the outside.
 */
export class TransferCountingDevice implements ComputeDevice {
  hostToDevice = 0;
  deviceToHost = 0;

  constructor(private readonly inner: ComputeDevice) {}

  get name(): string {
    return this.inner.name;
  }

  get localMemBytes(): number {
    return this.inner.localMemBytes;
  }

  get transferCount(): number {
    return this.hostToDevice + this.deviceToHost;
  }

  reset(): void {
    this.hostToDevice = 0;
    this.deviceToHost = 0;
  }

  compile(sourceId: string, source: string, options: string): CompiledKernel {
    return this.inner.compile(sourceId, source, options);
  }

  createBuffer(byteLength: number): DeviceBuffer {
    return this.inner.createBuffer(byteLength);
  }

  writeBuffer(dst: DeviceBuffer, data: Float32Array): void {
    this.hostToDevice += 1;
    this.inner.writeBuffer(dst, data);
  }

  readBuffer(src: DeviceBuffer, dst: Float32Array): void {
    this.deviceToHost += 1;
    this.inner.readBuffer(src, dst);
  }

  dispatchMatmul(
    kernel: CompiledKernel,
    n: number,
    a: DeviceBuffer,
    b: DeviceBuffer,
    c: DeviceBuffer,
  ): void {
    this.inner.dispatchMatmul(kernel, n, a, b, c);
  }

  releaseBuffer(buffer: DeviceBuffer): void {
    this.inner.releaseBuffer(buffer);
  }
}
