/**
 * Local-magnification augmentation over plain contiguous buffers.
 *
 * Every operation delegates to the installed `loma` tool through its file
 * formats (PNG in, PNG out; tensor files for feature maps), so outputs are
 * byte-identical to what the tool itself produces for the same config,
 * seed and item index. Input buffers are never mutated; outputs are
 * freshly allocated. Calls share no state and may run from any thread.
 */

import { mkdirSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli } from "./cli";
import { DEFAULT_CONFIG, FeatureConfigDoc, LomaConfigDoc } from "./config";
import { CliError } from "./errors";
import { checkImageBuffer, decodePng, encodePng, ImageBuffer } from "./png";
import { checkFeatureMap, decodeTensor, Dims4, encodeTensor, FeatureMap } from "./tensorfile";

export { CliError, IoError, TensorFileError, ValidationError } from "./errors";
export { DEFAULT_CONFIG, preset, PRESETS, resolveConfig } from "./config";
export type {
  FeatureConfigDoc,
  InterpName,
  LomaConfigDoc,
  PresetName,
  ResolvedConfigDoc,
  ShapeName,
} from "./config";
export { decodePng, encodePng } from "./png";
export type { Channels, ImageBuffer } from "./png";
export { decodeTensor, encodeTensor } from "./tensorfile";
export type { Dims4, FeatureMap } from "./tensorfile";
export { cliCommand, runCli } from "./cli";
export type { CliEvent } from "./cli";

/** The sampled deformation: center, size, shape and per-axis ratios. */
export interface SpecRecord {
  x_c: number;
  y_c: number;
  r: number;
  shape: string;
  a_x: number;
  a_y: number;
}

export interface AugmentResult {
  /** Freshly allocated output pixels, same dims as the input. */
  image: ImageBuffer;
  /** Whether the probability gate fired for this item. */
  applied: boolean;
  /** The sampled deformation when applied, else null. */
  spec: SpecRecord | null;
}

export interface FeatureResult {
  /** Freshly allocated output values, same dims as the input. */
  features: FeatureMap;
  /** Whether the mini-batch gate fired. */
  applied: boolean;
}

let placeholderBytes: Buffer | null = null;

/** A 1x1 PNG used to pad the item list up to the requested stream index. */
function placeholderPng(): Buffer {
  if (placeholderBytes === null) {
    placeholderBytes = encodePng({
      width: 1,
      height: 1,
      channels: 1,
      data: new Uint8Array(1),
    });
  }
  return placeholderBytes;
}

function itemName(index: number): string {
  return `item_${String(index).padStart(8, "0")}.png`;
}

function checkSeed(seed: number): void {
  if (!Number.isInteger(seed)) {
    throw new TypeError(`seed must be an integer, got ${seed}`);
  }
}

function withWorkDir<T>(fn: (work: string) => T): T {
  const work = mkdtempSync(join(tmpdir(), "loma-bind-"));
  try {
    return fn(work);
  } finally {
    rmSync(work, { recursive: true, force: true });
  }
}

/**
 * Augment one (H, W, C) 8-bit image with the item stream derived from
 * (seed, index), exactly as a batch run over a directory would treat the
 * file at position `index`.
 *
 * Returns fresh pixels plus the sampled deformation record (null when the
 * probability gate left the image unchanged). Rejected configs raise
 * ValidationError with the tool's own message; bad buffers raise
 * TypeError without spawning anything.
 */
export function augmentImage(
  image: ImageBuffer,
  config: LomaConfigDoc | undefined,
  seed: number,
  index: number
): AugmentResult {
  checkImageBuffer(image);
  checkSeed(seed);
  if (!Number.isInteger(index) || index < 0) {
    throw new TypeError(`index must be a non-negative integer, got ${index}`);
  }
  return withWorkDir((work) => {
    const indir = join(work, "in");
    const outdir = join(work, "out");
    mkdirSync(indir);
    for (let i = 0; i < index; i++) {
      writeFileSync(join(indir, itemName(i)), placeholderPng());
    }
    writeFileSync(join(indir, itemName(index)), encodePng(image));

    const args = ["augment", "--in", indir, "--out", outdir, "--seed", String(seed), "--jobs", "1"];
    if (config !== undefined) {
      const configPath = join(work, "config.json");
      writeFileSync(configPath, JSON.stringify(config));
      args.push("--config", configPath);
    }
    const events = runCli(args);

    const item = events.find((e) => e.event === "item" && e.index === index);
    if (item === undefined) {
      throw new CliError(`no item record for index ${index}`, -1, "");
    }
    const out = decodePng(readFileSync(join(outdir, itemName(index))));
    if (out.width !== image.width || out.height !== image.height || out.channels !== image.channels) {
      throw new CliError(
        `output dims ${out.height}x${out.width}x${out.channels} do not match ` +
          `input ${image.height}x${image.width}x${image.channels}`,
        -1,
        ""
      );
    }
    return {
      image: out,
      applied: item.applied === true,
      spec: (item.spec as SpecRecord | null) ?? null,
    };
  });
}

/**
 * Augment a (B, C, H, W) float32 feature map: one gate draw at p_f, then
 * the magnification shared across batch and channels followed by the
 * random rigid offset, exactly as the backing tool applies them.
 *
 * The full merged config document is validated up front even when the
 * gate stays closed, so invalid values always raise ValidationError with
 * the tool's message. The gate draw itself is the first value of the
 * (seed, 0) stream, matching a direct in-process call.
 */
export function augmentFeatures(
  features: FeatureMap,
  config: LomaConfigDoc | undefined,
  featureConfig: FeatureConfigDoc | undefined,
  seed: number
): FeatureResult {
  checkFeatureMap(features);
  checkSeed(seed);
  const merged: LomaConfigDoc = {
    ...(config ?? {}),
    feature: { ...(config?.feature ?? {}), ...(featureConfig ?? {}) },
  };
  const pf = merged.feature?.p_f ?? DEFAULT_CONFIG.feature.p_f;
  // The gate is probed through the sample subcommand, whose single gate
  // draw per index is the same first draw of the (seed, 0) stream. Its
  // probability field must hold p_f; if p_f itself is out of range a
  // stand-in keeps the probe parseable so validation fails on the real
  // feature.p_f field instead.
  const gateP = typeof pf === "number" && pf >= 0 && pf <= 1 ? pf : 0;

  return withWorkDir((work) => {
    const probePath = join(work, "probe.json");
    writeFileSync(probePath, JSON.stringify({ ...merged, p: gateP }));
    const probe = runCli([
      "sample",
      "--config",
      probePath,
      "--seed",
      String(seed),
      "--count",
      "1",
      "--width",
      "8",
      "--height",
      "8",
    ]);
    const gate = probe.find((e) => e.event === "spec" && e.index === 0);
    if (gate === undefined) {
      throw new CliError("no gate record from sample probe", -1, "");
    }
    if (gate.applied !== true) {
      const dims: Dims4 = [features.dims[0], features.dims[1], features.dims[2], features.dims[3]];
      return {
        features: { dims, data: new Float32Array(features.data) },
        applied: false,
      };
    }

    const inPath = join(work, "in.tnsr");
    const outPath = join(work, "out.tnsr");
    const configPath = join(work, "config.json");
    writeFileSync(inPath, encodeTensor(features));
    writeFileSync(configPath, JSON.stringify(merged));
    runCli([
      "feature",
      "--op",
      "both",
      "--in",
      inPath,
      "--out",
      outPath,
      "--config",
      configPath,
      "--seed",
      String(seed),
    ]);
    return { features: decodeTensor(readFileSync(outPath)), applied: true };
  });
}
