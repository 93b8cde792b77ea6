import { describe, expect, it } from "vitest";

import { ApiError, HetvizClient } from "./api.js";
import { sampleBundle } from "./testData.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("HetvizClient", () => {
  it("parses the service error envelope into ApiError", async () => {
    const client = new HetvizClient("", async () =>
      jsonResponse({ error: { code: "not_found", message: "no such dataset" } }, 404),
    );
    const err = await client.getScheme("nope").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("not_found");
    expect(err.message).toBe("no such dataset");
  });

  it("falls back to the status code for non-JSON error bodies", async () => {
    const client = new HetvizClient(
      "",
      async () => new Response("gateway timeout", { status: 504 }),
    );
    const err = await client.getScheme("x").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("http_error");
    expect(err.message).toBe("504");
  });

  it("builds the layout query string from the given params", async () => {
    const urls: string[] = [];
    const client = new HetvizClient("http://s", async (url) => {
      urls.push(url);
      return jsonResponse(sampleBundle());
    });
    await client.getLayout("d1", {
      ref: "class",
      purity: 0.85,
      minsize: 0.1,
      join: true,
      sort: "frequency_desc",
      flips: ["X11", "X12"],
    });
    expect(urls).toHaveLength(1);
    const url = new URL(urls[0]);
    expect(url.pathname).toBe("/api/datasets/d1/layout");
    expect(url.searchParams.get("ref")).toBe("class");
    expect(url.searchParams.get("purity")).toBe("0.85");
    expect(url.searchParams.get("minsize")).toBe("0.1");
    expect(url.searchParams.get("join")).toBe("true");
    expect(url.searchParams.get("flips")).toBe("X11,X12");
  });

  it("omits the query string when no params are given", async () => {
    const urls: string[] = [];
    const client = new HetvizClient("", async (url) => {
      urls.push(url);
      return jsonResponse(sampleBundle());
    });
    await client.getLayout("d1");
    expect(urls[0]).toBe("/api/datasets/d1/layout");
  });

  it("drops a layout response that was superseded by a newer request", async () => {
    const resolvers: ((r: Response) => void)[] = [];
    const client = new HetvizClient(
      "",
      () => new Promise<Response>((resolve) => resolvers.push(resolve)),
    );
    const first = client.getLayout("d1", { purity: 0.5 });
    const second = client.getLayout("d1", { purity: 0.9 });
    // Resolve out of order: the slow first response arrives last.
    resolvers[1](jsonResponse(sampleBundle(0.9)));
    resolvers[0](jsonResponse(sampleBundle(0.5)));
    expect(await first).toBeNull();
    const fresh = await second;
    expect(fresh?.params.purity).toBe(0.9);
  });

  it("latest-wins guards are independent per endpoint", async () => {
    const client = new HetvizClient("", async (url) =>
      url.includes("/report")
        ? jsonResponse({ report: ["line"] })
        : jsonResponse(sampleBundle()),
    );
    const [layout, report] = await Promise.all([
      client.getLayout("d1"),
      client.getReport("d1"),
    ]);
    expect(layout).not.toBeNull();
    expect(report).toEqual(["line"]);
  });

  it("posts rule JSON and returns the metrics body verbatim", async () => {
    let captured: { url: string; init?: RequestInit } | null = null;
    const metrics = { coverage: 3, correct: 3, precision: 1, error_rate: 0, decided: 3 };
    const client = new HetvizClient("", async (url, init) => {
      captured = { url, init };
      return jsonResponse(metrics);
    });
    const rule = { if: { atom: "in_set", attr: "X11", values: ["m"] }, then: "yellow" };
    const result = await client.evalRule("d1", rule);
    expect(result).toEqual(metrics);
    expect(captured!.url).toBe("/api/datasets/d1/rules/eval");
    expect(captured!.init?.method).toBe("POST");
    expect(JSON.parse(captured!.init?.body as string)).toEqual(rule);
  });
});
