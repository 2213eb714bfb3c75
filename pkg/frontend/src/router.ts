import { encodeKeyword } from "./api.js";

export type Route =
  | { view: "search" }
  | { view: "keyword"; keyword: string }
  | { view: "cluster"; id: number }
  | { view: "diagram" };

/** Map a pathname onto a route; anything unrecognized falls back to search
 * so stale deep links degrade gracefully. */
export function parseRoute(pathname: string): Route {
  if (pathname === "/" || pathname === "") {
    return { view: "search" };
  }
  if (pathname === "/diagram") {
    return { view: "diagram" };
  }
  if (pathname.startsWith("/k/")) {
    const raw = pathname.slice(3);
    if (raw) {
      // decode per segment so an encoded "/" inside a segment survives
      const keyword = raw.split("/").map(decodeURIComponent).join("/");
      return { view: "keyword", keyword };
    }
  }
  if (pathname.startsWith("/c/")) {
    const id = Number(pathname.slice(3));
    if (Number.isInteger(id) && id >= 1) {
      return { view: "cluster", id };
    }
  }
  return { view: "search" };
}

export function routePath(route: Route): string {
  switch (route.view) {
    case "search":
      return "/";
    case "keyword":
      return `/k/${encodeKeyword(route.keyword)}`;
    case "cluster":
      return `/c/${route.id}`;
    case "diagram":
      return "/diagram";
  }
}
