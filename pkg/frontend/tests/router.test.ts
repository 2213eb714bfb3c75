import { describe, expect, it } from "vitest";

import { encodeKeyword } from "../src/api.js";
import { parseRoute, routePath } from "../src/router.js";

describe("parseRoute", () => {
  it("maps the root to the search view", () => {
    expect(parseRoute("/")).toEqual({ view: "search" });
    expect(parseRoute("")).toEqual({ view: "search" });
  });

  it("recognizes the diagram path", () => {
    expect(parseRoute("/diagram")).toEqual({ view: "diagram" });
  });

  it("decodes keyword paths segment by segment", () => {
    expect(parseRoute("/k/interaction")).toEqual({ view: "keyword", keyword: "interaction" });
    expect(parseRoute("/k/flow%20visualization")).toEqual({
      view: "keyword",
      keyword: "flow visualization",
    });
  });

  it("keeps a literal slash inside a keyword", () => {
    expect(parseRoute("/k/client/server")).toEqual({
      view: "keyword",
      keyword: "client/server",
    });
  });

  it("parses cluster ids", () => {
    expect(parseRoute("/c/3")).toEqual({ view: "cluster", id: 3 });
    expect(parseRoute("/c/12")).toEqual({ view: "cluster", id: 12 });
  });

  it("falls back to search for anything unrecognized", () => {
    for (const path of ["/c/0", "/c/-1", "/c/abc", "/c/1.5", "/k/", "/nope", "/c/"]) {
      expect(parseRoute(path).view).toBe("search");
    }
  });
});

describe("routePath", () => {
  it("is inverted by parseRoute", () => {
    const routes = [
      { view: "search" as const },
      { view: "diagram" as const },
      { view: "cluster" as const, id: 7 },
      { view: "keyword" as const, keyword: "flow visualization" },
      { view: "keyword" as const, keyword: "client/server" },
      { view: "keyword" as const, keyword: "focus+context" },
    ];
    for (const route of routes) {
      expect(parseRoute(routePath(route))).toEqual(route);
    }
  });

  it("escapes keyword segments but not their separators", () => {
    expect(routePath({ view: "keyword", keyword: "flow visualization" })).toBe(
      "/k/flow%20visualization",
    );
    expect(routePath({ view: "keyword", keyword: "client/server" })).toBe("/k/client/server");
  });
});

describe("encodeKeyword", () => {
  it("percent-encodes within segments and keeps slashes literal", () => {
    expect(encodeKeyword("interaction")).toBe("interaction");
    expect(encodeKeyword("flow visualization")).toBe("flow%20visualization");
    expect(encodeKeyword("client/server")).toBe("client/server");
    expect(encodeKeyword("focus+context")).toBe("focus%2Bcontext");
    expect(encodeKeyword("a&b=c")).toBe("a%26b%3Dc");
  });
});
