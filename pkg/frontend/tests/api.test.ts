import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FakeServer } from "./fakeServer.js";

function client(server: FakeServer): ApiClient {
  return new ApiClient("", server.fetch);
}

describe("ApiClient", () => {
  it("lists graphs with their views and stats", async () => {
    const server = new FakeServer();
    server.addGraph("alpha");
    const { graphs } = await client(server).listGraphs();
    expect(graphs).toHaveLength(1);
    expect(graphs[0].id).toBe("alpha");
    expect(graphs[0].stats.visible_edges).toBe(5);
  });

  it("carries the engine error envelope into ApiError", async () => {
    const server = new FakeServer();
    const api = client(server);
    const err = await api.stats("missing").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("UnknownGraph");
    expect(err.status).toBe(404);
  });

  it("serializes view updates and heatmap requests", async () => {
    const server = new FakeServer();
    server.addGraph("alpha");
    const api = client(server);
    const updated = await api.putView("alpha", { channels: ["email"] });
    expect(updated.view.channels).toEqual(["email"]);
    const heat = await api.heatmap([{ graph: "alpha", person: 1 }], "email");
    expect(heat.persons).toEqual([1]);
    expect(heat.cells[0][0]).toBe(2);
    expect(server.requests).toContain("PUT /api/graphs/alpha/view");
    expect(server.requests).toContain("POST /api/heatmap");
  });

  it("passes histogram query parameters through", async () => {
    const server = new FakeServer();
    server.addGraph("alpha");
    await client(server).histogram("alpha", 100, 0);
    expect(server.requests.at(-1)).toBe("GET /api/graphs/alpha/histogram?bin_width=100&origin=0");
  });
});
