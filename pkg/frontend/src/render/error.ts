import { escapeHtml } from "./html.js";

/** Banner shown when an API call fails; the retry button re-runs the
 * current route's loader. */
export function renderErrorBanner(message: string): string {
  return (
    `<div class="error-banner" role="alert">` +
    `<span class="error-message">${escapeHtml(message)}</span> ` +
    `<button type="button" data-action="retry">retry</button>` +
    `</div>`
  );
}
