import { TimeoutError, TransportError, UnknownSampleError } from "./errors.js";
import { HttpTransport } from "./httpTransport.js";
import { StdioTransport } from "./stdioTransport.js";
import type { Transport } from "./transport.js";
import {
  resolveConfig,
  type BatchReply,
  type ClientConfig,
  type ResolvedConfig,
  type RewardBreakdown,
  type ScoreRequest,
  type ScoreResultItem,
  type ServerErrorPayload,
} from "./types.js";

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Client for the reward service. Contains no scoring logic of its own: the
 * server is the single source of truth for every reward, and this class only
 * moves requests and replies. Safe for concurrent use; each call is
 * independent.
 */
export class RewardClient {
  private readonly config: ResolvedConfig;
  private readonly transport: Transport;

  constructor(config: ClientConfig) {
    this.config = resolveConfig(config);
    this.transport = this.config.endpoint !== undefined
      ? new HttpTransport(this.config.endpoint, this.config.timeoutMs)
      : new StdioTransport(this.config.command as string[], this.config.timeoutMs);
  }

  /**
   * Score a rollout group: every response in `responses` against the one
   * sample's ground truth. Resolves with one breakdown per response, in
   * order. An empty group resolves to an empty list without touching the
   * wire. Throws UnknownSampleError (with the server's payload) if the
   * sample id isn't in the served manifest, TimeoutError / TransportError
   * after the configured retries for wire trouble.
   */
  async scoreGroup(sampleId: string, responses: string[]): Promise<RewardBreakdown[]> {
    if (responses.length === 0) return [];
    const requests: ScoreRequest[] = responses.map((text, i) => ({
      sample_id: sampleId,
      response_text: text,
      request_id: String(i),
    }));
    const reply = await this.exchange("/score_batch", { requests });
    return this.unpackBatch(reply, responses.length);
  }

  close(): void {
    this.transport.close();
  }

  private async exchange(path: string, payload: unknown): Promise<unknown> {
    let attempt = 0;
    for (;;) {
      try {
        return await this.transport.request(path, payload);
      } catch (err) {
        const retryable =
          err instanceof TimeoutError || (err instanceof TransportError && err.retryable);
        if (!retryable || attempt >= this.config.maxRetries) throw err;
        await sleep(this.config.retryBackoffMs * 2 ** attempt);
        attempt += 1;
      }
    }
  }

  private unpackBatch(reply: unknown, expected: number): RewardBreakdown[] {
    const body = reply as Partial<BatchReply> & { error?: ServerErrorPayload };
    if (body && body.error) {
      // the server rejected the batch envelope itself; resending the same
      // bytes cannot succeed, so surface it without retrying
      throw new TransportError(`server rejected the batch: ${body.error.kind}`, {
        retryable: false,
        payload: body.error,
      });
    }
    if (!body || !Array.isArray(body.results)) {
      throw new TransportError("reply has no results list");
    }
    if (body.results.length !== expected) {
      throw new TransportError(
        `reply has ${body.results.length} results for ${expected} requests`,
      );
    }
    return body.results.map((item: ScoreResultItem) => {
      if (item.error) {
        if (item.error.kind === "unknown_sample") throw new UnknownSampleError(item.error);
        throw new TransportError(`server rejected a request: ${item.error.kind}`, {
          retryable: false,
          payload: item.error,
        });
      }
      const { r_acc, r_fmt, r } = item;
      if (typeof r_acc !== "number" || typeof r_fmt !== "number" || typeof r !== "number") {
        throw new TransportError("result item is missing reward fields");
      }
      return { r_acc, r_fmt, r };
    });
  }
}
