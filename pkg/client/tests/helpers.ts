import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { once } from "node:events";
import { createInterface } from "node:readline";
import { fileURLToPath } from "node:url";
import path from "node:path";

export const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "..", "fixtures");
export const MANIFEST = path.join(FIXTURES, "manifest.jsonl");

export interface LiveServer {
  endpoint: string;
  stop(): Promise<void>;
}

/** Spawn the real reward server on a random port and wait for its banner. */
export async function startHttpServer(manifest: string = MANIFEST): Promise<LiveServer> {
  const proc: ChildProcessWithoutNullStreams = spawn(
    "python3",
    ["-m", "spatial_forge.server", "--manifest", manifest, "--bind", "127.0.0.1:0"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const stderr: string[] = [];
  proc.stderr.on("data", (chunk) => stderr.push(String(chunk)));

  const lines = createInterface({ input: proc.stdout });
  const banner = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(
      () => reject(new Error(`server produced no banner; stderr: ${stderr.join("")}`)),
      15_000,
    );
    lines.once("line", (line) => {
      clearTimeout(timer);
      resolve(line);
    });
    proc.once("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early (code ${code}); stderr: ${stderr.join("")}`));
    });
  });

  const address = banner.replace(/^listening on /, "");
  return {
    endpoint: `http://${address}`,
    async stop() {
      if (proc.exitCode === null) {
        proc.kill();
        await once(proc, "exit");
      }
    },
  };
}

/** Argv that runs the same server in stdio mode, for StdioTransport configs. */
export function stdioCommand(manifest: string = MANIFEST): string[] {
  return ["python3", "-m", "spatial_forge.server", "--manifest", manifest, "--stdio"];
}

export interface FixtureGroup {
  sampleId: string;
  responses: string[];
  expected: { r_acc: number; r_fmt: number; r: number }[];
}

/** Parse responses.jsonl + expected.jsonl into per-sample rollout groups. */
export async function loadFixtureGroups(): Promise<FixtureGroup[]> {
  const { readFile } = await import("node:fs/promises");
  const responses = (await readFile(path.join(FIXTURES, "responses.jsonl"), "utf8"))
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as { sample_id: string; response: string });
  const expected = (await readFile(path.join(FIXTURES, "expected.jsonl"), "utf8"))
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as { sample_id: string; r_acc: number; r_fmt: number; r: number });

  if (responses.length !== expected.length) {
    throw new Error("fixture files disagree on length; regenerate them");
  }
  const groups = new Map<string, FixtureGroup>();
  responses.forEach((req, i) => {
    const exp = expected[i]!;
    if (exp.sample_id !== req.sample_id) {
      throw new Error(`fixture line ${i} mismatched sample ids; regenerate`);
    }
    let group = groups.get(req.sample_id);
    if (!group) {
      group = { sampleId: req.sample_id, responses: [], expected: [] };
      groups.set(req.sample_id, group);
    }
    group.responses.push(req.response);
    group.expected.push({ r_acc: exp.r_acc, r_fmt: exp.r_fmt, r: exp.r });
  });
  return [...groups.values()];
}
