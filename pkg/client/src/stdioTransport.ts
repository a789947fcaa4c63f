import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface, type Interface } from "node:readline";

import { TimeoutError, TransportError } from "./errors.js";
import type { Transport } from "./transport.js";

interface Pending {
  resolve: (reply: unknown) => void;
  reject: (err: Error) => void;
  timer: NodeJS.Timeout;
}

/**
 * Speaks the line protocol to a spawned server process: one JSON request per
 * stdin line, one JSON reply per stdout line, strictly in order. A FIFO queue
 * pairs replies with requests, so concurrent calls stay correct.
 *
 * A timeout poisons the pairing (a late reply would match the wrong request),
 * so it kills the process and fails everything in flight; the next request
 * respawns a fresh one. The retry loop above treats that as transport
 * trouble, which keeps the restart invisible when the server recovers.
 */
export class StdioTransport implements Transport {
  private proc: ChildProcessWithoutNullStreams | null = null;
  private lines: Interface | null = null;
  private queue: Pending[] = [];
  private closed = false;

  constructor(private readonly command: string[], private readonly timeoutMs: number) {}

  private ensureProcess(): ChildProcessWithoutNullStreams {
    if (this.proc !== null) return this.proc;
    if (this.closed) throw new TransportError("transport is closed", { retryable: false });
    const [argv0, ...argv] = this.command;
    if (!argv0) throw new TransportError("empty command", { retryable: false });
    const proc = spawn(argv0, argv, { stdio: ["pipe", "pipe", "pipe"] });
    const lines = createInterface({ input: proc.stdout });

    lines.on("line", (line) => {
      const pending = this.queue.shift();
      if (!pending) return; // a reply nothing is waiting for; drop it
      clearTimeout(pending.timer);
      try {
        pending.resolve(JSON.parse(line));
      } catch (err) {
        pending.reject(new TransportError("non-JSON reply line", { cause: err }));
      }
    });

    proc.on("error", (err) => this.failAll(new TransportError("failed to spawn server process", { cause: err })));
    proc.on("exit", (code) => {
      if (this.proc === proc) {
        this.proc = null;
        this.lines = null;
      }
      this.failAll(new TransportError(`server process exited (code ${code})`));
    });

    this.proc = proc;
    this.lines = lines;
    return proc;
  }

  private failAll(err: Error): void {
    const waiting = this.queue;
    this.queue = [];
    for (const pending of waiting) {
      clearTimeout(pending.timer);
      pending.reject(err);
    }
  }

  private killProcess(): void {
    const proc = this.proc;
    this.proc = null;
    this.lines?.close();
    this.lines = null;
    if (proc && proc.exitCode === null) proc.kill();
  }

  request(_path: string, payload: unknown): Promise<unknown> {
    const proc = this.ensureProcess();
    return new Promise<unknown>((resolve, reject) => {
      const pending: Pending = {
        resolve,
        reject,
        timer: setTimeout(() => {
          // replies after this point would pair with the wrong request;
          // tear the pipe down and let the retry loop respawn it
          this.killProcess();
          this.queue = this.queue.filter((p) => p !== pending);
          this.failAll(new TransportError("pipe reset after a timed-out request"));
          reject(new TimeoutError(this.timeoutMs));
        }, this.timeoutMs),
      };
      this.queue.push(pending);
      proc.stdin.write(JSON.stringify(payload) + "\n", (err) => {
        if (err) {
          clearTimeout(pending.timer);
          this.queue = this.queue.filter((p) => p !== pending);
          reject(new TransportError("failed to write request", { cause: err }));
        }
      });
    });
  }

  close(): void {
    this.closed = true;
    this.killProcess();
    this.failAll(new TransportError("transport closed", { retryable: false }));
  }
}
