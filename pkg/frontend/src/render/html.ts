export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function escapeAttr(text: string): string {
  return escapeHtml(text);
}

export function formatNumber(value: number, digits = 3): string {
  return value.toFixed(digits);
}

export function clusterBadge(cluster: number | null): string {
  if (cluster === null) {
    return `<span class="badge badge-none" title="not in the clustered keyword set">&ndash;</span>`;
  }
  return `<a class="badge cluster-${cluster}" data-nav href="/c/${cluster}">C${cluster}</a>`;
}
