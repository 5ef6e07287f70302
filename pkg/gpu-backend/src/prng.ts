/**
 * SplitMix64, the fixed portable generator behind deterministic test
 * matrices.  The k-th draw (0-based) mixes the state `seed + (k+1) * GOLDEN`
 * and each 64-bit output maps to [0, 1) through its top 53 bits, so a given
 * (seed, count) yields the same stream in any language with 64-bit integers.
 */

const MASK64 = (1n << 64n) - 1n;
const GOLDEN = 0x9e3779b97f4a7c15n;
const MIX1 = 0xbf58476d1ce4e5b9n;
const MIX2 = 0x94d049bb133111ebn;

/** First `count` outputs of SplitMix64 seeded with `seed`. */
export function splitmix64(seed: bigint | number, count: number): BigUint64Array {
  if (!Number.isInteger(count) || count < 0) {
    throw new RangeError(`count must be a non-negative integer, got ${count}`);
  }
  const state = BigInt(seed) & MASK64;
  const out = new BigUint64Array(count);
  for (let k = 0; k < count; k += 1) {
    let z = (state + BigInt(k + 1) * GOLDEN) & MASK64;
    z = ((z ^ (z >> 30n)) * MIX1) & MASK64;
    z = ((z ^ (z >> 27n)) * MIX2) & MASK64;
    out[k] = z ^ (z >> 31n);
  }
  return out;
}

/** First `count` uniform doubles in [0, 1): top 53 bits of each draw. */
export function uniformDoubles(seed: bigint | number, count: number): Float64Array {
  const raw = splitmix64(seed, count);
  const out = new Float64Array(count);
  for (let k = 0; k < count; k += 1) {
    out[k] = Number((raw[k] as bigint) >> 11n) * 2 ** -53;
  }
  return out;
}
