/**
 * Error types shared across the binding.
 *
 * Failures reported by the backing `loma` process are mapped onto typed
 * errors by exit code, carrying the tool's own diagnostic text so callers
 * see the same message a CLI user would.
 */

/** Malformed or unsupported tensor file bytes. */
export class TensorFileError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "TensorFileError";
  }
}

/** The backing process failed; `exitCode` preserves its exit status. */
export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr: string) {
    super(message);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

/** Rejected configuration or input values (exit code 3). */
export class ValidationError extends CliError {
  constructor(message: string, stderr: string) {
    super(message, 3, stderr);
    this.name = "ValidationError";
  }
}

/** File or format problems on the backing side (exit code 2). */
export class IoError extends CliError {
  constructor(message: string, stderr: string) {
    super(message, 2, stderr);
    this.name = "IoError";
  }
}
