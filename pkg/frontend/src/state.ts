/** The whole client-side state; everything else on screen is a pure
 * function of this plus API responses. */
export interface ViewState {
  query: string;
  keyword: string | null;
  cluster: number | null;
  trendVisible: boolean;
}

export function initialState(): ViewState {
  return { query: "", keyword: null, cluster: null, trendVisible: true };
}
