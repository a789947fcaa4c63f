import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { RewardClient } from "../src/index.js";
import { loadFixtureGroups, startHttpServer, stdioCommand, type FixtureGroup, type LiveServer } from "./helpers.js";

/**
 * The golden contract: for the committed fixture set (20 samples x 5
 * responses), the client must return exactly what the offline scoring CLI
 * said about the same inputs — over both wire modes.
 */
describe("client/CLI equivalence on the golden fixtures", () => {
  let groups: FixtureGroup[];

  beforeAll(async () => {
    groups = await loadFixtureGroups();
    expect(groups).toHaveLength(20);
    for (const group of groups) expect(group.responses).toHaveLength(5);
  });

  describe("http", () => {
    let server: LiveServer;
    let client: RewardClient;

    beforeAll(async () => {
      server = await startHttpServer();
      client = new RewardClient({ endpoint: server.endpoint });
    });

    afterAll(async () => {
      client.close();
      await server.stop();
    });

    it("returns identical rewards for every group", async () => {
      for (const group of groups) {
        const got = await client.scoreGroup(group.sampleId, group.responses);
        expect(got).toEqual(group.expected);
      }
    });

    it("covers the full reward ladder", async () => {
      const group = groups[0]!;
      const got = await client.scoreGroup(group.sampleId, group.responses);
      expect(got.map((b) => b.r)).toEqual([1.0, 0.9, 0.1, 0.1, 0.0]);
    });
  });

  describe("stdio", () => {
    let client: RewardClient;

    beforeAll(() => {
      client = new RewardClient({ command: stdioCommand() });
    });

    afterAll(() => {
      client.close();
    });

    it("returns identical rewards for every group", async () => {
      for (const group of groups) {
        const got = await client.scoreGroup(group.sampleId, group.responses);
        expect(got).toEqual(group.expected);
      }
    });
  });
});
