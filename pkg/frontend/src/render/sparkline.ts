export interface SparklinePoint {
  x: number;
  y: number;
  year: number;
  count: number;
}

export interface SparklineGeometry {
  points: SparklinePoint[];
  path: string;
}

/** Pixel geometry for a yearly count series.  Pure: same series, same
 * numbers.  Counts map linearly onto the vertical span with the maximum at
 * the top; a flat series draws as a centered horizontal line. */
export function sparklineGeometry(
  series: [number, number][],
  width: number,
  height: number,
  pad = 4,
): SparklineGeometry {
  if (series.length === 0) {
    return { points: [], path: "" };
  }
  const counts = series.map(([, count]) => count);
  const min = Math.min(...counts);
  const max = Math.max(...counts);
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const step = series.length > 1 ? innerW / (series.length - 1) : 0;
  const points = series.map(([year, count], index) => {
    const x = series.length > 1 ? pad + index * step : width / 2;
    const y =
      max === min ? height / 2 : pad + ((max - count) / (max - min)) * innerH;
    return { x, y, year, count };
  });
  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(2)},${p.y.toFixed(2)}`)
    .join(" ");
  return { points, path };
}

export function renderSparkline(
  series: [number, number][],
  width: number,
  height: number,
): string {
  const { points, path } = sparklineGeometry(series, width, height);
  const dots = points
    .map(
      (p) =>
        `<circle class="spark-dot" cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="2.5" ` +
        `data-year="${p.year}" data-count="${p.count}">` +
        `<title>${p.year}: ${p.count}</title></circle>`,
    )
    .join("");
  return (
    `<svg class="sparkline" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    `<path class="spark-line" d="${path}" fill="none"></path>${dots}</svg>`
  );
}
