import { routePath } from "../router.js";
import type { ClusterDetail, Neighbor } from "../types.js";
import { renderClusterGraph } from "./graph.js";
import { escapeHtml, formatNumber } from "./html.js";

function metricCell(label: string, value: string, field: string): string {
  return (
    `<div class="metric"><span class="metric-label">${label}</span>` +
    `<span class="metric-value" data-field="${field}">${value}</span></div>`
  );
}

export function renderClusterView(
  detail: ClusterDetail,
  neighborLists: Map<string, Neighbor[]>,
  graphSize: number,
): string {
  const rows = detail.members
    .map(
      (m) =>
        `<tr><td><a data-nav href="${routePath({ view: "keyword", keyword: m.keyword })}">` +
        `${escapeHtml(m.keyword)}</a></td>` +
        `<td class="num" data-field="occurrences">${m.occurrences}</td></tr>`,
    )
    .join("");
  return (
    `<section class="view view-cluster" data-cluster="${detail.id}">` +
    `<p class="crumbs"><a data-nav href="/diagram">strategic diagram</a></p>` +
    `<h1><span class="badge cluster-${detail.id}">C${detail.id}</span> ` +
    `${escapeHtml(detail.top_keywords.join(" / "))}</h1>` +
    `<p class="subtitle" data-field="quadrant-label">Quadrant ${escapeHtml(detail.quadrant)}: ` +
    `${escapeHtml(detail.quadrant_label)}</p>` +
    `<div class="metrics">` +
    metricCell("members", String(detail.n), "n") +
    metricCell("median freq", formatNumber(detail.median_freq, 1), "median_freq") +
    metricCell("cw freq", formatNumber(detail.cw_freq, 2), "cw_freq") +
    metricCell("centrality", formatNumber(detail.centrality, 4), "centrality") +
    metricCell("density", formatNumber(detail.density, 4), "density") +
    `</div>` +
    `<div class="cluster-body">` +
    `<table class="member-table"><thead><tr><th>keyword</th><th class="num">papers</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    renderClusterGraph(detail, neighborLists, graphSize) +
    `</div>` +
    `</section>`
  );
}
