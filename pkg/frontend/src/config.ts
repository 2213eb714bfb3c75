export const API_BASE = "/api/v1";

// Page size for the search-as-you-type result list.
export const SEARCH_LIMIT = 25;

// Page size when pulling a keyword's full co-occurrence list for the
// cluster graph; matches the service's maximum.
export const COOCCURRING_LIMIT = 500;

// Strategic points whose margin (data-space distance to a median line)
// is below this fraction of the axis range get a "near median" marker:
// their quadrant assignment would flip under a small data change.
export const NEAR_MEDIAN_FRACTION = 0.05;

export const SPARKLINE_WIDTH = 260;
export const SPARKLINE_HEIGHT = 56;
export const SCATTER_SIZE = 420;
export const GRAPH_SIZE = 360;

// Corner captions for the strategic diagram; per-point labels always come
// from the API payload.
export const QUADRANT_TITLES: Record<string, string> = {
  I: "motor themes",
  II: "basic and transversal themes",
  III: "developed but isolated themes",
  IV: "emerging or declining themes",
};
