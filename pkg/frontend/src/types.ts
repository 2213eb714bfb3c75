// Response shapes of the /api/v1/ endpoints, mirrored verbatim.

export interface KeywordSummary {
  keyword: string;
  occurrences: number;
  cluster: number | null;
}

export interface Page<T> {
  total: number;
  offset: number;
  limit: number;
  items: T[];
}

export interface Neighbor {
  keyword: string;
  count: number;
  correlation: number | null;
  cluster: number | null;
}

export interface PaperRecord {
  id: string;
  title: string;
  venue: string;
  year: number;
  keywords: string[];
}

export interface TrendFit {
  slope: number;
  stderr: number;
  p_value: number;
  total: number;
  years: number[];
  significant: boolean;
}

export interface TrendPayload {
  keyword: string;
  years: number[];
  series: [number, number][];
  fit: TrendFit | null;
}

export interface KeywordDetail extends KeywordSummary {
  cluster_label: string | null;
  papers: PaperRecord[];
  cooccurring: Neighbor[];
  trend: TrendPayload;
}

export interface ClusterSummary {
  id: number;
  n: number;
  median_freq: number;
  cw_freq: number;
  centrality: number;
  density: number;
  quadrant: string;
  quadrant_label: string;
  top_keywords: string[];
}

export interface ClusterMember {
  keyword: string;
  occurrences: number;
}

export interface ClusterDetail extends ClusterSummary {
  members: ClusterMember[];
}

export interface ClusterPage {
  k: number;
  items: ClusterSummary[];
}

export interface CooccurringPage extends Page<Neighbor> {
  keyword: string;
}

export interface StrategicApiPoint {
  cluster: number;
  x: number;
  y: number;
  quadrant: string;
  label: string;
  margin: [number, number];
}

export interface StrategicPayload {
  median_centrality: number;
  median_density: number;
  points: StrategicApiPoint[];
}
