/**
 * Tiled-matmul GPU backend: OpenCL kernel variants compiled at runtime
 * from plain-text sources, a validating host shim with a two-transfer
 * exponentiation path, and an in-process emulated device for conformance
 * testing without hardware.
 */

export {
  BudgetError,
  CompileError,
  DeviceUnavailableError,
  GpuBackendError,
  ValidationError,
} from "./errors.js";
export type { TileShape, UnrollFactor, VectorWidth } from "./tiles.js";
export {
  TILE_MENU,
  UNROLL_FACTORS,
  VECTOR_WIDTHS,
  checkDivisibility,
  isMenuTile,
  stagedFootprintBytes,
  tileLabel,
} from "./tiles.js";
export { splitmix64, uniformDoubles } from "./prng.js";
export type { DTypeName, HostMatrix, MatrixF32 } from "./matrix.js";
export {
  fromRowsF32,
  identityF32,
  matrixF32,
  nextAfterF32,
  nextAfterF64,
  randomMatrix,
  toF32,
} from "./matrix.js";
export type { ErrorMetrics } from "./reference.js";
export {
  EPS_F32,
  compareToReference,
  deviceTol,
  exponentiateTol,
  matmulNaiveF32,
  matmulNaiveF64,
  matmulTiledF32,
  repeatedPowerF64,
} from "./reference.js";
export {
  formatMatrixText,
  parseMatrixText,
  readMatrixFile,
  writeMatrixFile,
} from "./matrixio.js";
export type { TrafficPrediction, TrafficReport } from "./traffic.js";
export {
  TRAFFIC_FIELDS,
  parseTrafficCsv,
  parseTrafficKv,
  predictTraffic,
  trafficCsvHeader,
} from "./traffic.js";
export type { KernelVariant } from "./variants.js";
export {
  MATMUL_SOURCE_ID,
  VARIANT_MENU,
  buildOptions,
  loadKernelSource,
  makeVariant,
  menuVariant,
  variantName,
} from "./variants.js";
export type { CompiledKernel, ComputeDevice, DeviceBuffer } from "./device.js";
export { TransferCountingDevice } from "./device.js";
export { EmulatedDevice } from "./emulator.js";
export type { ExponentiateOutcome, GpuBackendHandle, PlanStep } from "./host.js";
export {
  asBackend,
  gpuExponentiate,
  gpuMatmul,
  multiplyCountFor,
  planExponentiation,
} from "./host.js";
