/**
 * PNG encode/decode between files and (H, W, C) byte buffers.
 *
 * Channel counts map to PNG color types the same way the backing tool's
 * image layer maps them to Pillow modes (1=gray, 2=gray+alpha, 3=RGB,
 * 4=RGBA), so pixels survive the file boundary losslessly in both
 * directions.
 */

import { PNG } from "pngjs";

export type Channels = 1 | 2 | 3 | 4;

/** A row-major (H, W, C) 8-bit image over contiguous memory. */
export interface ImageBuffer {
  width: number;
  height: number;
  channels: Channels;
  data: Uint8Array;
}

const COLOR_TYPE = { 1: 0, 2: 4, 3: 2, 4: 6 } as const;
const CHANNELS_FOR_COLOR_TYPE: Record<number, Channels | undefined> = {
  0: 1,
  4: 2,
  2: 3,
  6: 4,
};

function typeName(value: unknown): string {
  if (value === null) return "null";
  if (typeof value !== "object") return typeof value;
  return value.constructor?.name ?? "object";
}

/** Validate a caller-supplied image buffer; throws TypeError on mismatch. */
export function checkImageBuffer(img: ImageBuffer): void {
  if (!Number.isInteger(img.width) || img.width < 1) {
    throw new TypeError(`width must be a positive integer, got ${img.width}`);
  }
  if (!Number.isInteger(img.height) || img.height < 1) {
    throw new TypeError(`height must be a positive integer, got ${img.height}`);
  }
  if (![1, 2, 3, 4].includes(img.channels)) {
    throw new TypeError(`channels must be 1..4, got ${img.channels}`);
  }
  if (!(img.data instanceof Uint8Array)) {
    throw new TypeError(`image data must be a Uint8Array, got ${typeName(img.data)}`);
  }
  const count = img.width * img.height * img.channels;
  if (img.data.length !== count) {
    throw new TypeError(
      `image data has ${img.data.length} bytes, ` +
        `${img.height}x${img.width}x${img.channels} requires ${count}`
    );
  }
}

/** Encode an (H, W, C) buffer as a PNG with the matching color type. */
export function encodePng(img: ImageBuffer): Buffer {
  checkImageBuffer(img);
  const { width, height, channels, data } = img;
  const png = new PNG({ width, height, colorType: COLOR_TYPE[channels] });
  const rgba = png.data;
  const n = width * height;
  for (let i = 0; i < n; i++) {
    const s = i * channels;
    const d = i * 4;
    switch (channels) {
      case 1:
        rgba[d] = rgba[d + 1] = rgba[d + 2] = data[s];
        rgba[d + 3] = 255;
        break;
      case 2:
        rgba[d] = rgba[d + 1] = rgba[d + 2] = data[s];
        rgba[d + 3] = data[s + 1];
        break;
      case 3:
        rgba[d] = data[s];
        rgba[d + 1] = data[s + 1];
        rgba[d + 2] = data[s + 2];
        rgba[d + 3] = 255;
        break;
      case 4:
        rgba[d] = data[s];
        rgba[d + 1] = data[s + 1];
        rgba[d + 2] = data[s + 2];
        rgba[d + 3] = data[s + 3];
        break;
    }
  }
  return PNG.sync.write(png, { colorType: COLOR_TYPE[channels] });
}

/** Decode PNG bytes to an (H, W, C) buffer, inferring C from the color type. */
export function decodePng(bytes: Uint8Array): ImageBuffer {
  const buf = Buffer.isBuffer(bytes)
    ? bytes
    : Buffer.from(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const png = PNG.sync.read(buf);
  const channels = CHANNELS_FOR_COLOR_TYPE[png.colorType];
  if (channels === undefined) {
    throw new Error(`unsupported PNG color type ${png.colorType}`);
  }
  const { width, height } = png;
  const rgba = png.data;
  const n = width * height;
  const data = new Uint8Array(n * channels);
  for (let i = 0; i < n; i++) {
    const s = i * 4;
    const d = i * channels;
    switch (channels) {
      case 1:
        data[d] = rgba[s];
        break;
      case 2:
        data[d] = rgba[s];
        data[d + 1] = rgba[s + 3];
        break;
      case 3:
        data[d] = rgba[s];
        data[d + 1] = rgba[s + 1];
        data[d + 2] = rgba[s + 2];
        break;
      case 4:
        data[d] = rgba[s];
        data[d + 1] = rgba[s + 1];
        data[d + 2] = rgba[s + 2];
        data[d + 3] = rgba[s + 3];
        break;
    }
  }
  return { width, height, channels, data };
}
