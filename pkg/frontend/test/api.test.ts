import { describe, expect, it } from "vitest";

import { ApiError, Client } from "../src/api.js";
import type { ChainConfig } from "../src/types.js";

interface Captured {
  url: string;
  init?: RequestInit;
}

function stubClient(status: number, body: unknown): [Client, Captured] {
  const captured: Captured = { url: "" };
  const fetchFn = (url: string, init?: RequestInit) => {
    captured.url = url;
    captured.init = init;
    return Promise.resolve(new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    }));
  };
  return [new Client("http://svc", fetchFn), captured];
}

const CHAIN: ChainConfig = {
  dt: 1e-3,
  post_smooth: 0,
  stages: [{ freq_hz: 40, damping_rate: 2, sigma_x2: 1e-4, sigma_f2: 1e-2 }],
};

describe("Client", () => {
  it("unwraps the dataset listing", async () => {
    const [client, captured] = stubClient(200, {
      datasets: [{ id: "pulse", file: "pulse.csv", digest: "ab" }],
    });
    const entries = await client.datasets();
    expect(captured.url).toBe("http://svc/api/datasets");
    expect(entries[0]!.id).toBe("pulse");
  });

  it("escapes dataset ids in the path", async () => {
    const [client, captured] = stubClient(200, {
      dt: 1e-3, t0: 0, units: "", values: [],
    });
    await client.dataset("a b");
    expect(captured.url).toBe("http://svc/api/datasets/a%20b");
  });

  it("posts the filter body with series ref and chain", async () => {
    const [client, captured] = stubClient(200, { series: {}, stages: [] });
    await client.filter({ dataset: "pulse" }, CHAIN);
    expect(captured.url).toBe("http://svc/api/filter");
    expect(captured.init?.method).toBe("POST");
    const sent = JSON.parse(String(captured.init?.body));
    expect(sent.dataset).toBe("pulse");
    expect(sent.chain).toEqual(CHAIN);
  });

  it("turns service error bodies into ApiError", async () => {
    const [client] = stubClient(400, {
      error: "stage frequency 600.0 Hz is at or above the Nyquist limit",
      code: "nyquist",
    });
    const err = await client.filter({ dataset: "x" }, CHAIN).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("nyquist");
    expect(err.status).toBe(400);
    expect(String(err.message)).toContain("600.0");
  });

  it("copes with non-JSON failure bodies", async () => {
    const fetchFn = () => Promise.resolve(
      new Response("<html>bad gateway</html>", { status: 502 }));
    const client = new Client("http://svc", fetchFn);
    const err = await client.datasets().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("http");
    expect(err.status).toBe(502);
  });
});
