/**
 * Binary tensor file codec for feature maps.
 *
 * Layout, all integers little-endian:
 *
 *     magic    8 bytes  "LOMATNSR"
 *     version  u32      1
 *     ndim     u32      4
 *     dims     4 x u64  B, C, H, W
 *     dtype    u32      1 = float32 little-endian
 *     payload  B*C*H*W float32 values, row-major
 *
 * The encode/decode pair is bit-lossless and byte-compatible with the
 * files the `loma feature` subcommand reads and writes.
 */

import { TensorFileError } from "./errors";

export const TENSOR_MAGIC = "LOMATNSR";
export const TENSOR_VERSION = 1;
export const TENSOR_DTYPE_F32 = 1;

const HEADER_SIZE = 52;

export type Dims4 = [number, number, number, number];

/** A (B, C, H, W) float32 feature map over contiguous row-major memory. */
export interface FeatureMap {
  dims: Dims4;
  data: Float32Array;
}

function checkDims(dims: readonly number[]): asserts dims is Dims4 {
  if (!Array.isArray(dims) || dims.length !== 4) {
    throw new TypeError(`expected 4 dims (B, C, H, W), got ${JSON.stringify(dims)}`);
  }
  for (const d of dims) {
    if (!Number.isInteger(d) || d < 0) {
      throw new TypeError(`dims must be non-negative integers, got ${JSON.stringify(dims)}`);
    }
  }
}

function typeName(value: unknown): string {
  if (value === null) return "null";
  if (typeof value !== "object") return typeof value;
  return value.constructor?.name ?? "object";
}

/** Validate a caller-supplied feature map; throws TypeError on mismatch. */
export function checkFeatureMap(fm: FeatureMap): void {
  checkDims(fm.dims);
  if (!(fm.data instanceof Float32Array)) {
    throw new TypeError(`feature map data must be a Float32Array, got ${typeName(fm.data)}`);
  }
  const count = fm.dims[0] * fm.dims[1] * fm.dims[2] * fm.dims[3];
  if (fm.data.length !== count) {
    throw new TypeError(
      `feature map data has ${fm.data.length} values, dims ${fm.dims.join("x")} require ${count}`
    );
  }
}

/** Serialize a feature map to the tensor file byte layout. */
export function encodeTensor(fm: FeatureMap): Buffer {
  checkFeatureMap(fm);
  const buf = Buffer.alloc(HEADER_SIZE + 4 * fm.data.length);
  buf.write(TENSOR_MAGIC, 0, "ascii");
  buf.writeUInt32LE(TENSOR_VERSION, 8);
  buf.writeUInt32LE(4, 12);
  for (let i = 0; i < 4; i++) {
    buf.writeBigUInt64LE(BigInt(fm.dims[i]), 16 + 8 * i);
  }
  buf.writeUInt32LE(TENSOR_DTYPE_F32, 48);
  const view = new DataView(buf.buffer, buf.byteOffset + HEADER_SIZE);
  for (let i = 0; i < fm.data.length; i++) {
    view.setFloat32(4 * i, fm.data[i], true);
  }
  return buf;
}

/** Parse tensor file bytes; throws TensorFileError on any malformed input. */
export function decodeTensor(bytes: Uint8Array): FeatureMap {
  if (bytes.length < HEADER_SIZE) {
    throw new TensorFileError(
      `file is ${bytes.length} bytes, shorter than the ${HEADER_SIZE}-byte header`
    );
  }
  const buf = Buffer.isBuffer(bytes) ? bytes : Buffer.from(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const magic = buf.toString("ascii", 0, 8);
  if (magic !== TENSOR_MAGIC) {
    throw new TensorFileError(`bad magic ${JSON.stringify(magic)}, expected ${JSON.stringify(TENSOR_MAGIC)}`);
  }
  const version = buf.readUInt32LE(8);
  if (version !== TENSOR_VERSION) {
    throw new TensorFileError(`unsupported version ${version}`);
  }
  const ndim = buf.readUInt32LE(12);
  if (ndim !== 4) {
    throw new TensorFileError(`unsupported ndim ${ndim}, expected 4`);
  }
  const dims: number[] = [];
  for (let i = 0; i < 4; i++) {
    const d = buf.readBigUInt64LE(16 + 8 * i);
    if (d > BigInt(Number.MAX_SAFE_INTEGER)) {
      throw new TensorFileError(`dim ${i} out of range: ${d}`);
    }
    dims.push(Number(d));
  }
  const dtype = buf.readUInt32LE(48);
  if (dtype !== TENSOR_DTYPE_F32) {
    throw new TensorFileError(`unsupported dtype code ${dtype}`);
  }
  const count = dims[0] * dims[1] * dims[2] * dims[3];
  const payload = buf.length - HEADER_SIZE;
  if (payload !== 4 * count) {
    throw new TensorFileError(
      `payload is ${payload} bytes, dims ${dims.join("x")} require ${4 * count}`
    );
  }
  const data = new Float32Array(count);
  const view = new DataView(buf.buffer, buf.byteOffset + HEADER_SIZE, 4 * count);
  for (let i = 0; i < count; i++) {
    data[i] = view.getFloat32(4 * i, true);
  }
  return { dims: dims as Dims4, data };
}
