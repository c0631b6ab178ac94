/**
 * Thin wrapper around the `loma` command-line tool.
 *
 * The tool prints line-delimited JSON events on stdout and diagnostics on
 * stderr, and signals failure kinds through its exit code (1 usage, 2 I/O,
 * 3 validation). Those diagnostics are surfaced verbatim as typed errors,
 * so e.g. a rejected config raises with the exact validation message.
 */

import { spawnSync } from "node:child_process";

import { CliError, IoError, ValidationError } from "./errors";

/** One parsed line of JSON output. */
export type CliEvent = Record<string, unknown>;

/**
 * Resolve the command to run. Defaults to the installed `loma` entry
 * point; set LOMA_CLI (whitespace-separated, e.g. "python3 -m loma.cli")
 * to point at a different interpreter or checkout.
 */
export function cliCommand(): string[] {
  const override = process.env.LOMA_CLI;
  if (override !== undefined && override.trim() !== "") {
    return override.trim().split(/\s+/);
  }
  return ["loma"];
}

const DIAGNOSTIC_PREFIX = /^loma: (?:config error: |tensor file error: |invalid input: |i\/o error: |error: )?/;

function diagnostic(stderr: string): string {
  const lines = stderr
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line !== "");
  const last = lines[lines.length - 1] ?? "";
  return last.replace(DIAGNOSTIC_PREFIX, "");
}

/**
 * Run the tool with the given arguments and return its parsed JSON events.
 * Non-zero exits become ValidationError (3), IoError (2) or CliError.
 */
export function runCli(args: string[]): CliEvent[] {
  const [command, ...prefix] = cliCommand();
  const proc = spawnSync(command, [...prefix, ...args], {
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error !== undefined) {
    throw new Error(`failed to run ${command}: ${proc.error.message}`);
  }
  const stderr = proc.stderr ?? "";
  if (proc.status !== 0) {
    const message = diagnostic(stderr) || `${command} exited with status ${proc.status}`;
    if (proc.status === 3) {
      throw new ValidationError(message, stderr);
    }
    if (proc.status === 2) {
      throw new IoError(message, stderr);
    }
    throw new CliError(message, proc.status ?? -1, stderr);
  }
  const events: CliEvent[] = [];
  for (const line of (proc.stdout ?? "").split("\n")) {
    if (line.trim() === "") {
      continue;
    }
    events.push(JSON.parse(line) as CliEvent);
  }
  return events;
}
