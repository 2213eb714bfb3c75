import { ApiError, api } from "./api.js";
import { GRAPH_SIZE, SCATTER_SIZE } from "./config.js";
import { renderClusterView } from "./render/cluster.js";
import { renderKeywordView, renderTrendPanel } from "./render/detail.js";
import { renderErrorBanner } from "./render/error.js";
import { renderDiagramView } from "./render/scatter.js";
import { renderSearchResults, renderSearchShell } from "./render/search.js";
import { parseRoute, routePath, type Route } from "./router.js";
import { initialState, type ViewState } from "./state.js";
import type { KeywordDetail, Neighbor } from "./types.js";

export interface App {
  state: ViewState;
  start(): Promise<void>;
  navigate(path: string): Promise<void>;
  /** Resolve once no route/search work is in flight (test hook). */
  idle(): Promise<void>;
}

function messageOf(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  return err instanceof Error ? err.message : String(err);
}

/** Wire the single-page app onto a root element.  All rendering is a pure
 * function of ViewState plus API payloads; handlers only update state and
 * re-render, so back/forward and deep links go through the same path. */
export function createApp(root: HTMLElement, win: Window): App {
  const state = initialState();
  let currentRoute: Route = { view: "search" };
  let lastDetail: KeywordDetail | null = null;
  let searchSeq = 0;
  let pending: Promise<void> = Promise.resolve();

  function track(work: Promise<void>): Promise<void> {
    pending = work;
    return work;
  }

  async function idle(): Promise<void> {
    let seen: Promise<void>;
    do {
      seen = pending;
      await seen.catch(() => undefined);
    } while (seen !== pending);
  }

  function showError(err: unknown): void {
    root.innerHTML = renderErrorBanner(messageOf(err));
  }

  // Stale-response guard: only the most recent keystroke's response may
  // touch the result list.
  async function runSearch(query: string): Promise<void> {
    const seq = ++searchSeq;
    try {
      const page = await api.searchKeywords(query);
      if (seq !== searchSeq || currentRoute.view !== "search") {
        return;
      }
      const results = root.querySelector<HTMLElement>("#results");
      if (results) {
        results.innerHTML = renderSearchResults(page);
      }
    } catch (err) {
      if (seq !== searchSeq || currentRoute.view !== "search") {
        return;
      }
      const results = root.querySelector<HTMLElement>("#results");
      if (results) {
        results.innerHTML = renderErrorBanner(messageOf(err));
      }
    }
  }

  async function load(route: Route): Promise<void> {
    currentRoute = route;
    if (route.view === "search") {
      state.keyword = null;
      state.cluster = null;
      root.innerHTML = renderSearchShell(state.query);
      win.document.title = "keyword explorer";
      await runSearch(state.query);
      return;
    }
    if (route.view === "keyword") {
      state.keyword = route.keyword;
      state.cluster = null;
      try {
        const detail = await api.keywordDetail(route.keyword);
        if (currentRoute !== route) {
          return;
        }
        lastDetail = detail;
        root.innerHTML = renderKeywordView(detail, state.trendVisible);
        win.document.title = `${detail.keyword} · keyword explorer`;
      } catch (err) {
        if (currentRoute === route) {
          showError(err);
        }
      }
      return;
    }
    if (route.view === "cluster") {
      state.keyword = null;
      state.cluster = route.id;
      try {
        const detail = await api.cluster(route.id);
        const lists = await Promise.all(
          detail.members.map(
            async (m) =>
              [m.keyword, (await api.cooccurring(m.keyword)).items] as const,
          ),
        );
        if (currentRoute !== route) {
          return;
        }
        const neighborLists = new Map<string, Neighbor[]>(lists);
        root.innerHTML = renderClusterView(detail, neighborLists, GRAPH_SIZE);
        win.document.title = `cluster ${detail.id} · keyword explorer`;
      } catch (err) {
        if (currentRoute === route) {
          showError(err);
        }
      }
      return;
    }
    state.keyword = null;
    state.cluster = null;
    try {
      const [payload, clusters] = await Promise.all([api.strategic(), api.clusters()]);
      if (currentRoute !== route) {
        return;
      }
      root.innerHTML = renderDiagramView(payload, clusters.items, SCATTER_SIZE);
      win.document.title = "strategic diagram · keyword explorer";
    } catch (err) {
      if (currentRoute === route) {
        showError(err);
      }
    }
  }

  function navigate(path: string): Promise<void> {
    const route = parseRoute(path);
    win.history.pushState(null, "", routePath(route));
    return track(load(route));
  }

  function onClick(event: Event): void {
    const el = event.target as Element | null;
    const hit = el?.closest?.("[data-nav],[data-action]");
    if (!hit) {
      return;
    }
    if (hit.hasAttribute("data-nav")) {
      event.preventDefault();
      const href = hit.getAttribute("href");
      if (href) {
        void navigate(href);
      }
      return;
    }
    const action = hit.getAttribute("data-action");
    if (action === "toggle-trend") {
      // Toggling only re-renders the panel from the cached payload; it
      // never refetches.
      state.trendVisible = !state.trendVisible;
      const panel = root.querySelector(".trend-panel");
      if (panel && lastDetail) {
        panel.outerHTML = renderTrendPanel(lastDetail.trend, state.trendVisible);
      }
    } else if (action === "retry") {
      void track(load(currentRoute));
    }
  }

  function onInput(event: Event): void {
    const input = event.target as HTMLInputElement | null;
    if (!input || input.id !== "search") {
      return;
    }
    state.query = input.value;
    void track(runSearch(state.query));
  }

  root.addEventListener("click", onClick);
  root.addEventListener("input", onInput);
  win.addEventListener("popstate", () => {
    void track(load(parseRoute(win.location.pathname)));
  });

  return {
    state,
    start: () => track(load(parseRoute(win.location.pathname))),
    navigate,
    idle,
  };
}
