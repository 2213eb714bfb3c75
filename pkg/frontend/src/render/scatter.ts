import { NEAR_MEDIAN_FRACTION, QUADRANT_TITLES } from "../config.js";
import type { ClusterSummary, StrategicPayload } from "../types.js";
import { escapeHtml } from "./html.js";

export interface PlacedCluster {
  cluster: number;
  px: number;
  py: number;
  quadrant: string;
  label: string;
  nearMedian: boolean;
}

export interface ScatterGeometry {
  placed: PlacedCluster[];
  crosshair: { px: number; py: number };
}

interface Scale {
  min: number;
  span: number;
}

function axisScale(values: number[]): Scale {
  const min = Math.min(...values);
  const max = Math.max(...values);
  return { min, span: max - min };
}

function place(value: number, scale: Scale, extent: number, pad: number): number {
  if (scale.span === 0) {
    return extent / 2;
  }
  return pad + ((value - scale.min) / scale.span) * (extent - 2 * pad);
}

/** Pixel positions for the strategic diagram: centrality on x, density on
 * y (up = denser).  The near-median flag uses the API-provided margins, so
 * no quadrant arithmetic is redone client-side. */
export function scatterGeometry(
  payload: StrategicPayload,
  size: number,
  nearFraction: number = NEAR_MEDIAN_FRACTION,
  pad = 32,
): ScatterGeometry {
  const xs = payload.points.map((p) => p.x).concat(payload.median_centrality);
  const ys = payload.points.map((p) => p.y).concat(payload.median_density);
  const scaleX = axisScale(xs);
  const scaleY = axisScale(ys);
  const placed = payload.points.map((p) => ({
    cluster: p.cluster,
    px: place(p.x, scaleX, size, pad),
    py: size - place(p.y, scaleY, size, pad),
    quadrant: p.quadrant,
    label: p.label,
    nearMedian:
      p.margin[0] <= nearFraction * scaleX.span ||
      p.margin[1] <= nearFraction * scaleY.span,
  }));
  return {
    placed,
    crosshair: {
      px: place(payload.median_centrality, scaleX, size, pad),
      py: size - place(payload.median_density, scaleY, size, pad),
    },
  };
}

export function renderDiagram(
  payload: StrategicPayload,
  clusters: ClusterSummary[],
  size: number,
): string {
  const { placed, crosshair } = scatterGeometry(payload, size);
  const byId = new Map(clusters.map((c) => [c.id, c]));
  const circles = placed
    .map((p) => {
      const summary = byId.get(p.cluster);
      const keywords = summary ? summary.top_keywords.join(", ") : "";
      const classes = ["point", `cluster-${p.cluster}`];
      if (p.nearMedian) {
        classes.push("near-median");
      }
      return (
        `<g class="${classes.join(" ")}" data-cluster="${p.cluster}" data-quadrant="${p.quadrant}">` +
        `<circle cx="${p.px.toFixed(2)}" cy="${p.py.toFixed(2)}" r="9">` +
        `<title>${escapeHtml(`C${p.cluster} (${p.label}): ${keywords}`)}</title></circle>` +
        `<text x="${p.px.toFixed(2)}" y="${(p.py + 3.5).toFixed(2)}" text-anchor="middle">${p.cluster}</text>` +
        `</g>`
      );
    })
    .join("");
  const corners =
    `<text class="corner" x="${size - 8}" y="16" text-anchor="end">I &middot; ${QUADRANT_TITLES.I}</text>` +
    `<text class="corner" x="${size - 8}" y="${size - 8}" text-anchor="end">II &middot; ${QUADRANT_TITLES.II}</text>` +
    `<text class="corner" x="8" y="16">III &middot; ${QUADRANT_TITLES.III}</text>` +
    `<text class="corner" x="8" y="${size - 8}">IV &middot; ${QUADRANT_TITLES.IV}</text>`;
  return (
    `<svg class="diagram" viewBox="0 0 ${size} ${size}" width="${size}" height="${size}" role="img" ` +
    `aria-label="strategic diagram">` +
    `<line class="median" x1="${crosshair.px.toFixed(2)}" y1="0" x2="${crosshair.px.toFixed(2)}" y2="${size}"></line>` +
    `<line class="median" x1="0" y1="${crosshair.py.toFixed(2)}" x2="${size}" y2="${crosshair.py.toFixed(2)}"></line>` +
    corners +
    circles +
    `</svg>`
  );
}

export function renderDiagramView(
  payload: StrategicPayload,
  clusters: ClusterSummary[],
  size: number,
): string {
  const rows = clusters
    .map(
      (c) =>
        `<tr data-cluster-row="${c.id}">` +
        `<td><a data-nav href="/c/${c.id}" class="badge cluster-${c.id}">C${c.id}</a></td>` +
        `<td>${c.n}</td>` +
        `<td data-field="quadrant">${escapeHtml(c.quadrant)}</td>` +
        `<td data-field="quadrant-label">${escapeHtml(c.quadrant_label)}</td>` +
        `<td>${escapeHtml(c.top_keywords.map((kw) => `${kw}`).join(", "))}</td>` +
        `</tr>`,
    )
    .join("");
  return (
    `<section class="view view-diagram">` +
    `<h1>Strategic diagram</h1>` +
    `<p class="hint">centrality &rarr; external linkage; density &uarr; internal cohesion; ` +
    `dashed ring = near a median line</p>` +
    renderDiagram(payload, clusters, size) +
    `<table class="cluster-table"><thead><tr>` +
    `<th>cluster</th><th>n</th><th>quadrant</th><th>theme type</th><th>top keywords</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    `</section>`
  );
}
