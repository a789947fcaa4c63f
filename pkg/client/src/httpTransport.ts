import { TimeoutError, TransportError } from "./errors.js";
import type { Transport } from "./transport.js";

/**
 * One POST per request over global fetch, with an AbortController deadline.
 * Statuses: 2xx carry a scored body; 4xx carry a deliberate error body (not
 * retryable — the same request would fail the same way); 5xx and network
 * failures are transport trouble worth retrying.
 */
export class HttpTransport implements Transport {
  constructor(private readonly baseUrl: string, private readonly timeoutMs: number) {}

  async request(path: string, payload: unknown): Promise<unknown> {
    const controller = new AbortController();
    const timer = setTimeout(() => controller.abort(), this.timeoutMs);
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) throw new TimeoutError(this.timeoutMs);
      throw new TransportError(`request to ${this.baseUrl}${path} failed`, { cause: err });
    } finally {
      clearTimeout(timer);
    }

    let body: unknown;
    try {
      body = await response.json();
    } catch (err) {
      throw new TransportError(`non-JSON reply (status ${response.status})`, { cause: err });
    }

    if (response.status >= 500) {
      throw new TransportError(`server error ${response.status}`, { retryable: true });
    }
    if (response.status >= 400) {
      // deliberate rejection (unknown_sample, bad_request): hand the body back
      // so the caller can raise the matching typed error; never retried here
      return body;
    }
    return body;
  }

  close(): void {
    // nothing held open between requests
  }
}
