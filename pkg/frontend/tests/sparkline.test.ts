import { describe, expect, it } from "vitest";

import { renderSparkline, sparklineGeometry } from "../src/render/sparkline.js";
import type { TrendPayload } from "../src/types.js";
import { fixtureBody, fragment } from "./helpers.js";

const trend = fixtureBody<TrendPayload>("/api/v1/keywords/interaction/trend");

describe("sparklineGeometry", () => {
  it("keeps one point per series entry in order", () => {
    const geo = sparklineGeometry(trend.series, 260, 56);
    expect(geo.points.map((p) => p.year)).toEqual(trend.series.map(([y]) => y));
    expect(geo.points.map((p) => p.count)).toEqual(trend.series.map(([, c]) => c));
    for (let i = 1; i < geo.points.length; i++) {
      expect(geo.points[i].x).toBeGreaterThan(geo.points[i - 1].x);
    }
  });

  it("puts the maximum at the top pad and the minimum at the bottom pad", () => {
    const geo = sparklineGeometry(trend.series, 260, 56, 4);
    const byCount = new Map(geo.points.map((p) => [p.count, p.y]));
    expect(byCount.get(3)).toBeCloseTo(4, 10);
    expect(byCount.get(0)).toBeCloseTo(52, 10);
    for (const p of geo.points) {
      expect(p.y).toBeGreaterThanOrEqual(4);
      expect(p.y).toBeLessThanOrEqual(52);
    }
  });

  it("scales counts linearly between the extremes", () => {
    const geo = sparklineGeometry(trend.series, 260, 56, 4);
    const ys = new Map(geo.points.map((p) => [p.count, p.y]));
    // count 1 should sit two thirds of the way down a 0..3 range
    const expected = 4 + ((3 - 1) / 3) * 48;
    expect(ys.get(1)).toBeCloseTo(expected, 10);
  });

  it("draws a flat series as a centered line", () => {
    const geo = sparklineGeometry(
      [
        [2000, 2],
        [2001, 2],
        [2002, 2],
      ],
      100,
      40,
    );
    for (const p of geo.points) {
      expect(p.y).toBe(20);
    }
  });

  it("centers a single point", () => {
    const geo = sparklineGeometry([[2005, 4]], 100, 40);
    expect(geo.points).toHaveLength(1);
    expect(geo.points[0].x).toBe(50);
    expect(geo.points[0].y).toBe(20);
  });

  it("returns an empty geometry for an empty series", () => {
    expect(sparklineGeometry([], 100, 40)).toEqual({ points: [], path: "" });
  });
});

describe("renderSparkline", () => {
  it("stamps every dot with the year and count from the payload", () => {
    const host = fragment(renderSparkline(trend.series, 260, 56));
    const dots = Array.from(host.querySelectorAll("circle"));
    expect(dots.map((d) => Number(d.getAttribute("data-year")))).toEqual(
      trend.series.map(([y]) => y),
    );
    expect(dots.map((d) => Number(d.getAttribute("data-count")))).toEqual(
      trend.series.map(([, c]) => c),
    );
  });

  it("connects the dots with a single path", () => {
    const host = fragment(renderSparkline(trend.series, 260, 56));
    const path = host.querySelector("path.spark-line");
    expect(path).not.toBeNull();
    const d = path!.getAttribute("d")!;
    expect(d.startsWith("M")).toBe(true);
    expect(d.split("L")).toHaveLength(trend.series.length);
  });
});
