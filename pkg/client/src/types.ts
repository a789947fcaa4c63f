/** Wire-level types for the reward service. Field names match the wire exactly. */

/** One scored response: binary accuracy and format parts, and their weighted sum. */
export interface RewardBreakdown {
  r_acc: number;
  r_fmt: number;
  r: number;
}

/** A single scoring request as it travels on the wire. */
export interface ScoreRequest {
  sample_id: string;
  response_text: string;
  request_id?: string | null;
}

/** Error payload the server attaches to a failed request. */
export interface ServerErrorPayload {
  kind: string;
  sample_id?: string;
  detail?: string;
  [key: string]: unknown;
}

/** One item of a batch reply: either a scored breakdown or an inline error. */
export interface ScoreResultItem extends Partial<RewardBreakdown> {
  request_id?: string | null;
  sample_id?: string;
  canonical_gt_echo?: string;
  error?: ServerErrorPayload;
}

export interface BatchReply {
  results: ScoreResultItem[];
}

/**
 * How to reach the reward service. Exactly one of `endpoint` (HTTP base URL,
 * e.g. "http://127.0.0.1:8731") or `command` (argv to spawn a stdio-mode
 * server, e.g. ["python3", "-m", "spatial_forge.server", "--manifest", m,
 * "--stdio"]) must be given.
 *
 * Retries apply to transport failures only — a response the server actually
 * scored is never re-sent, so the policy is idempotent-safe by construction.
 */
export interface ClientConfig {
  endpoint?: string;
  command?: string[];
  /** Per-request deadline in milliseconds. Default 10_000. */
  timeoutMs?: number;
  /** Additional attempts after the first failure. Default 2. */
  maxRetries?: number;
  /** Base delay before a retry; doubles per attempt. Default 200. */
  retryBackoffMs?: number;
}

export interface ResolvedConfig {
  endpoint?: string;
  command?: string[];
  timeoutMs: number;
  maxRetries: number;
  retryBackoffMs: number;
}

export function resolveConfig(config: ClientConfig): ResolvedConfig {
  const hasEndpoint = typeof config.endpoint === "string" && config.endpoint.length > 0;
  const hasCommand = Array.isArray(config.command) && config.command.length > 0;
  if (hasEndpoint === hasCommand) {
    throw new Error("ClientConfig needs exactly one of `endpoint` or `command`");
  }
  const resolved: ResolvedConfig = {
    timeoutMs: config.timeoutMs ?? 10_000,
    maxRetries: config.maxRetries ?? 2,
    retryBackoffMs: config.retryBackoffMs ?? 200,
  };
  if (hasEndpoint) {
    resolved.endpoint = (config.endpoint as string).replace(/\/+$/, "");
  } else {
    resolved.command = [...(config.command as string[])];
  }
  if (resolved.timeoutMs <= 0) throw new Error("timeoutMs must be positive");
  if (resolved.maxRetries < 0) throw new Error("maxRetries must be >= 0");
  if (resolved.retryBackoffMs < 0) throw new Error("retryBackoffMs must be >= 0");
  return resolved;
}
