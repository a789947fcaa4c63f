/** A way to exchange one JSON payload for one JSON reply with the service. */
export interface Transport {
  /**
   * Send `payload` and resolve with the parsed reply. `path` selects the
   * operation ("/score" or "/score_batch"); the stdio pipe ignores it because
   * the line protocol infers the operation from the payload shape.
   * Rejects with TransportError / TimeoutError only.
   */
  request(path: string, payload: unknown): Promise<unknown>;
  close(): void;
}
