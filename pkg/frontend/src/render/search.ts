import { routePath } from "../router.js";
import type { KeywordSummary, Page } from "../types.js";
import { clusterBadge, escapeAttr, escapeHtml } from "./html.js";

export function renderSearchShell(query: string): string {
  return (
    `<section class="view view-search">` +
    `<h1>keyword explorer</h1>` +
    `<p class="hint">type to search; open a keyword for its papers, links and trend. ` +
    `<a data-nav href="/diagram">strategic diagram</a></p>` +
    `<input id="search" type="search" autocomplete="off" spellcheck="false" ` +
    `placeholder="search keywords" value="${escapeAttr(query)}">` +
    `<div id="results" aria-live="polite"></div>` +
    `</section>`
  );
}

export function renderSearchResults(page: Page<KeywordSummary>): string {
  if (page.items.length === 0) {
    return `<p class="muted">no keywords match</p>`;
  }
  const rows = page.items
    .map(
      (item) =>
        `<tr class="hit" data-keyword="${escapeAttr(item.keyword)}">` +
        `<td><a data-nav href="${routePath({ view: "keyword", keyword: item.keyword })}">` +
        `${escapeHtml(item.keyword)}</a></td>` +
        `<td class="num" data-field="occurrences">${item.occurrences}</td>` +
        `<td>${clusterBadge(item.cluster)}</td>` +
        `</tr>`,
    )
    .join("");
  const more =
    page.total > page.items.length
      ? `<p class="muted">showing ${page.items.length} of ${page.total}; keep typing to narrow</p>`
      : "";
  return (
    `<table class="results-table"><thead><tr><th>keyword</th><th class="num">papers</th>` +
    `<th>cluster</th></tr></thead><tbody>${rows}</tbody></table>` +
    more
  );
}
