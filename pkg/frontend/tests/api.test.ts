// The client addresses exactly the endpoints the service publishes.

import { describe, expect, it } from "vitest";

import { ApiClient, RequestFailed } from "../src/api.js";
import { FakeServer } from "./helpers.js";

describe("api client", () => {
  it("builds the documented paths", async () => {
    const server = new FakeServer();
    const ok = (body: unknown = {}) => () => ({ body });
    server.on("GET", /./, ok([]));
    server.on("POST", /\/preview\/rule$/, ok({ lppf: "x." }));
    server.on("POST", /./, ok({}));
    server.on("PUT", /./, ok({}));
    server.on("DELETE", /./, () => ({ status: 204, body: null }));
    const api = server.client();

    await api.getSchema();
    await api.listClassifiers();
    await api.getClassifier("soft-fragment");
    await api.previewRule({ label: "l", value: 1, conditions: [] });
    await api.runClassifier("soft-fragment", "demo");
    await api.listTransplants("demo");
    await api.applyClassifier(686, "soft-fragment", "demo");
    await api.deleteClassifier("old", true);

    const urls = server.exchanges.map((e) => `${e.method} ${e.url}`);
    expect(urls).toEqual([
      "GET /api/v1/schema",
      "GET /api/v1/classifiers",
      "GET /api/v1/classifiers/soft-fragment",
      "POST /api/v1/preview/rule",
      "POST /api/v1/classifiers/soft-fragment/run?dataset=demo",
      "GET /api/v1/transplants?dataset=demo",
      "POST /api/v1/transplants/686/apply/soft-fragment?dataset=demo",
      "DELETE /api/v1/classifiers/old?force=true",
    ]);
  });

  it("surfaces findings from 422 responses", async () => {
    const server = new FakeServer();
    server.on("PUT", /./, () => ({
      status: 422,
      body: { detail: "nope", findings: [{ code: "band-gap", message: "gap" }] },
    }));
    const api = server.client();
    try {
      await api.updateClassifier({ id: "x", name: "x", description: "",
                                   rules: [], bands: [] });
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(RequestFailed);
      expect((err as RequestFailed).error.findings[0].code).toBe("band-gap");
    }
  });
});
