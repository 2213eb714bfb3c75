import { SPARKLINE_HEIGHT, SPARKLINE_WIDTH } from "../config.js";
import { routePath } from "../router.js";
import type { KeywordDetail, Neighbor, PaperRecord, TrendPayload } from "../types.js";
import { clusterBadge, escapeHtml, formatNumber } from "./html.js";
import { renderSparkline } from "./sparkline.js";

function keywordLink(keyword: string): string {
  return `<a data-nav href="${routePath({ view: "keyword", keyword })}">${escapeHtml(keyword)}</a>`;
}

function neighborRow(nb: Neighbor): string {
  const corr =
    nb.correlation === null
      ? `<span class="muted" title="not in the clustered keyword set">&ndash;</span>`
      : formatNumber(nb.correlation, 3);
  return (
    `<tr class="neighbor" data-keyword="${escapeHtml(nb.keyword)}">` +
    `<td>${keywordLink(nb.keyword)}</td>` +
    `<td class="num" data-field="count">${nb.count}</td>` +
    `<td class="num" data-field="correlation">${corr}</td>` +
    `<td>${clusterBadge(nb.cluster)}</td>` +
    `</tr>`
  );
}

function paperRow(p: PaperRecord): string {
  const keywords = p.keywords.map(keywordLink).join(", ");
  return (
    `<li class="paper" data-paper="${escapeHtml(p.id)}">` +
    `<span class="paper-title">${escapeHtml(p.title)}</span> ` +
    `<span class="paper-meta">${escapeHtml(p.venue)} ${p.year}</span>` +
    `<div class="paper-keywords">${keywords}</div>` +
    `</li>`
  );
}

export function renderTrendPanel(trend: TrendPayload, visible: boolean): string {
  if (!visible) {
    return (
      `<section class="trend-panel" data-trend-visible="false">` +
      `<button type="button" data-action="toggle-trend">show trend</button>` +
      `</section>`
    );
  }
  const fit = trend.fit;
  const fitBlock = fit
    ? `<dl class="fit">` +
      `<dt>slope</dt><dd data-field="slope">${formatNumber(fit.slope, 6)}</dd>` +
      `<dt>stderr</dt><dd data-field="stderr">${formatNumber(fit.stderr, 6)}</dd>` +
      `<dt>p</dt><dd data-field="p_value">${formatNumber(fit.p_value, 6)}</dd>` +
      `<dt>significant</dt><dd data-field="significant">${fit.significant ? "yes" : "no"}</dd>` +
      `</dl>`
    : `<p class="muted" data-field="no-fit">not enough yearly data for a trend fit</p>`;
  return (
    `<section class="trend-panel" data-trend-visible="true">` +
    `<button type="button" data-action="toggle-trend">hide trend</button>` +
    `<div class="trend-years">${trend.years[0]}&ndash;${trend.years[1]}</div>` +
    renderSparkline(trend.series, SPARKLINE_WIDTH, SPARKLINE_HEIGHT) +
    fitBlock +
    `</section>`
  );
}

export function renderKeywordView(detail: KeywordDetail, trendVisible: boolean): string {
  const clusterLine =
    detail.cluster === null
      ? `<p class="subtitle">below the co-occurrence threshold; not clustered</p>`
      : `<p class="subtitle">cluster ${clusterBadge(detail.cluster)} ` +
        `<span data-field="cluster_label">${escapeHtml(detail.cluster_label ?? "")}</span></p>`;
  const neighbors = detail.cooccurring.map(neighborRow).join("");
  const papers = detail.papers.map(paperRow).join("");
  return (
    `<section class="view view-keyword" data-keyword="${escapeHtml(detail.keyword)}">` +
    `<p class="crumbs"><a data-nav href="/">search</a></p>` +
    `<h1>${escapeHtml(detail.keyword)} ` +
    `<span class="count" data-field="occurrences">${detail.occurrences}</span></h1>` +
    clusterLine +
    renderTrendPanel(detail.trend, trendVisible) +
    `<div class="columns">` +
    `<section class="cooccurring"><h2>co-occurring keywords</h2>` +
    (neighbors
      ? `<table><thead><tr><th>keyword</th><th class="num">shared</th>` +
        `<th class="num">r</th><th>cluster</th></tr></thead><tbody>${neighbors}</tbody></table>`
      : `<p class="muted">no co-occurring keywords</p>`) +
    `</section>` +
    `<section class="papers"><h2>papers (${detail.papers.length})</h2>` +
    `<ul class="paper-list">${papers}</ul></section>` +
    `</div>` +
    `</section>`
  );
}
