import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { randomMatrix } from "../src/matrix.js";
import {
  formatMatrixText,
  parseMatrixText,
  readMatrixFile,
  writeMatrixFile,
} from "../src/matrixio.js";
import { UNIFORM_F32_SEED7_HEX, UNIFORM_F32_SEED7_TEXT, toHex } from "./helpers.js";

const scratch = mkdtempSync(join(tmpdir(), "matrixio-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

describe("matrix text format", () => {
  it("round-trips f64 matrices bit-for-bit", () => {
    const m = randomMatrix(8, "f64", 3);
    const back = parseMatrixText(formatMatrixText(m));
    expect(back.n).toBe(8);
    expect(back.dtype).toBe("f64");
    expect(toHex(back.data as Float64Array)).toBe(toHex(m.data as Float64Array));
  });

  it("round-trips f32 matrices bit-for-bit", () => {
    const m = randomMatrix(5, "f32", 11);
    const back = parseMatrixText(formatMatrixText(m));
    expect(back.dtype).toBe("f32");
    expect(toHex(back.data as Float32Array)).toBe(toHex(m.data as Float32Array));
  });

  it("parses a file written by an independent producer to exact bytes", () => {
    const m = parseMatrixText(UNIFORM_F32_SEED7_TEXT);
    expect(m.n).toBe(4);
    expect(m.dtype).toBe("f32");
    expect(toHex(m.data as Float32Array)).toBe(UNIFORM_F32_SEED7_HEX);
    // And those bytes are what the generator produces directly.
    expect(toHex(randomMatrix(4, "f32", 7).data as Float32Array)).toBe(UNIFORM_F32_SEED7_HEX);
  });

  it("spells non-finite values portably", () => {
    const m = {
      n: 2,
      dtype: "f64" as const,
      data: Float64Array.from([Number.POSITIVE_INFINITY, Number.NEGATIVE_INFINITY, Number.NaN, 1.5]),
    };
    const text = formatMatrixText(m);
    expect(text).toBe("2 f64\ninf -inf\nnan 1.5\n");
    const back = parseMatrixText(text);
    expect(back.data[0]).toBe(Number.POSITIVE_INFINITY);
    expect(back.data[1]).toBe(Number.NEGATIVE_INFINITY);
    expect(Number.isNaN(back.data[2]!)).toBe(true);
    expect(back.data[3]).toBe(1.5);
  });

  it("writes and reads files on disk", () => {
    const path = join(scratch, "m.txt");
    const m = randomMatrix(6, "f32", 21);
    writeMatrixFile(m, path);
    const back = readMatrixFile(path);
    expect(toHex(back.data as Float32Array)).toBe(toHex(m.data as Float32Array));
  });

  it("rejects malformed input", () => {
    expect(() => parseMatrixText("")).toThrow(/header/);
    expect(() => parseMatrixText("2\n1 2\n3 4\n")).toThrow(/header/);
    expect(() => parseMatrixText("2 f16\n1 2\n3 4\n")).toThrow(/dtype/);
    expect(() => parseMatrixText("0 f32\n")).toThrow(/positive/);
    expect(() => parseMatrixText("2 f32\n1 2\n3\n")).toThrow(/row 1 has 1 values/);
    expect(() => parseMatrixText("2 f32\n1 2\n3 x\n")).toThrow(/numeric/);
  });
});
