/**
 * Shared test utilities: deterministic data generation and a direct
 * spawn of the backing tool that bypasses src/cli.ts, so parity tests
 * compare the binding against an independently driven run.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type { Channels, Dims4, FeatureMap, ImageBuffer } from "../src/index";

/** Tiny deterministic PRNG (mulberry32) for reproducible test data. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Uniform integer in [lo, hi] inclusive. */
export function randInt(rand: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rand() * (hi - lo + 1));
}

export function randomImage(
  rand: () => number,
  width: number,
  height: number,
  channels: Channels
): ImageBuffer {
  const data = new Uint8Array(width * height * channels);
  for (let i = 0; i < data.length; i++) {
    data[i] = Math.floor(rand() * 256);
  }
  return { width, height, channels, data };
}

export function randomTensor(rand: () => number, dims: Dims4): FeatureMap {
  const data = new Float32Array(dims[0] * dims[1] * dims[2] * dims[3]);
  for (let i = 0; i < data.length; i++) {
    data[i] = (rand() * 2 - 1) * 10;
  }
  return { dims, data };
}

export interface DirectRun {
  status: number | null;
  stdout: string;
  stderr: string;
  events: Record<string, unknown>[];
}

/** Run the backing tool directly, without going through src/cli.ts. */
export function primary(args: string[]): DirectRun {
  const proc = spawnSync("loma", args, { encoding: "utf8", maxBuffer: 256 * 1024 * 1024 });
  if (proc.error !== undefined) {
    throw proc.error;
  }
  const events: Record<string, unknown>[] = [];
  for (const line of (proc.stdout ?? "").split("\n")) {
    if (line.trim() !== "") {
      events.push(JSON.parse(line));
    }
  }
  return { status: proc.status, stdout: proc.stdout ?? "", stderr: proc.stderr ?? "", events };
}

/** Run a short Python snippet against the installed primary package. */
export function primaryPython(code: string, args: string[] = []): { status: number | null; stdout: string; stderr: string } {
  const proc = spawnSync("python3", ["-c", code, ...args], {
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error !== undefined) {
    throw proc.error;
  }
  return { status: proc.status, stdout: proc.stdout ?? "", stderr: proc.stderr ?? "" };
}

export function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "loma-test-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function itemName(index: number): string {
  return `item_${String(index).padStart(8, "0")}.png`;
}
