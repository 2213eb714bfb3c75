import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface CapturedResponse {
  status: number;
  body: unknown;
}

const here = dirname(fileURLToPath(import.meta.url));

/** Responses recorded from the live service by fixtures/capture.py, keyed
 * by the exact URL string the client builds. */
export const fixtures: Record<string, CapturedResponse> = JSON.parse(
  readFileSync(join(here, "fixtures", "api.json"), "utf8"),
);

export function fixtureBody<T>(url: string): T {
  const rec = fixtures[url];
  if (!rec) {
    throw new Error(`no fixture for ${url}`);
  }
  // structuredClone so tests cannot contaminate the shared fixture object
  return structuredClone(rec.body) as T;
}

function jsonResponse(status: number, body: unknown) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => structuredClone(body),
  };
}

export interface FetchStub {
  calls: string[];
  /** Next request for `url` gets this response instead of the fixture. */
  failOnce(url: string, status: number, message: string): void;
  /** Hold responses for `url` until the returned release function runs. */
  defer(url: string): () => void;
  install(): void;
  restore(): void;
}

/** Serve the captured fixtures in place of the network.  Requests for any
 * URL that was never captured reject loudly, so a client that strays off
 * the documented API fails its test instead of silently succeeding. */
export function createFetchStub(): FetchStub {
  const calls: string[] = [];
  const failures = new Map<string, CapturedResponse>();
  const gates = new Map<string, Promise<void>>();
  const original = globalThis.fetch;

  const fake = async (input: unknown) => {
    const url = String(input);
    calls.push(url);
    const gate = gates.get(url);
    if (gate) {
      await gate;
    }
    const failure = failures.get(url);
    if (failure) {
      failures.delete(url);
      return jsonResponse(failure.status, failure.body);
    }
    const rec = fixtures[url];
    if (!rec) {
      throw new Error(`unexpected request: ${url}`);
    }
    return jsonResponse(rec.status, rec.body);
  };

  return {
    calls,
    failOnce(url, status, message) {
      failures.set(url, { status, body: { error: { code: "error", message } } });
    },
    defer(url) {
      let release!: () => void;
      gates.set(
        url,
        new Promise<void>((resolve) => {
          release = resolve;
        }),
      );
      return () => {
        gates.delete(url);
        release();
      };
    },
    install() {
      globalThis.fetch = fake as typeof fetch;
    },
    restore() {
      globalThis.fetch = original;
    },
  };
}

/** Parse an HTML fragment into a detached container for assertions. */
export function fragment(html: string): HTMLElement {
  const host = document.createElement("div");
  host.innerHTML = html;
  return host;
}
