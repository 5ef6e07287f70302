/**
 * Error hierarchy for the tiled-matmul GPU backend.
 *
 * Host-side validation problems (shape, divisibility, local-memory budget)
 * are `ValidationError`s and are raised before any device interaction.
 * Build problems surface as `CompileError` with the device build log
 * attached; a missing device is `DeviceUnavailableError`.
 */

export class GpuBackendError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Invalid input rejected on the host before any transfer or compile. */
export class ValidationError extends GpuBackendError {}

/** Tile local-memory footprint exceeds the device's reported budget. */
export class BudgetError extends ValidationError {
  constructor(
    message: string,
    readonly footprintBytes: number,
    readonly budgetBytes: number,
  ) {
    super(message);
  }
}

/** Kernel build failed; `buildLog` carries the device compiler output. */
export class CompileError extends GpuBackendError {
  constructor(message: string, readonly buildLog: string) {
    super(message);
  }
}

/** No usable compute device is present. */
export class DeviceUnavailableError extends GpuBackendError {}
