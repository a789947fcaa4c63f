import type { ServerErrorPayload } from "./types.js";

/**
 * The request never got a scored reply: connection failure, process death,
 * malformed reply, or a 5xx. Retryable unless `retryable` is false (e.g. the
 * server rejected the request shape — resending the same bytes cannot help).
 */
export class TransportError extends Error {
  readonly retryable: boolean;
  readonly payload?: ServerErrorPayload;

  constructor(message: string, options: { retryable?: boolean; payload?: ServerErrorPayload; cause?: unknown } = {}) {
    super(message, options.cause === undefined ? undefined : { cause: options.cause });
    this.name = "TransportError";
    this.retryable = options.retryable ?? true;
    this.payload = options.payload;
  }
}

/** The per-request deadline elapsed before a reply arrived. */
export class TimeoutError extends Error {
  readonly timeoutMs: number;

  constructor(timeoutMs: number) {
    super(`no reply within ${timeoutMs} ms`);
    this.name = "TimeoutError";
    this.timeoutMs = timeoutMs;
  }
}

/**
 * The service answered, but doesn't know the sample id. Carries the server's
 * error payload verbatim. Never retried: the manifest the server loaded will
 * not change between attempts.
 */
export class UnknownSampleError extends Error {
  readonly sampleId: string;
  readonly payload: ServerErrorPayload;

  constructor(payload: ServerErrorPayload) {
    super(`unknown sample id: ${payload.sample_id ?? "?"}`);
    this.name = "UnknownSampleError";
    this.sampleId = String(payload.sample_id ?? "");
    this.payload = payload;
  }
}
