import { describe, expect, it } from "vitest";
import { frontPolyline, renderTable, scatterPoints, tableRows } from "../src/builder.js";
import { rankingFixture } from "./fixtures.js";

describe("ranking table", () => {
  it("rows preserve the service's ranking order", () => {
    const rows = tableRows(rankingFixture());
    expect(rows.map((r) => r.cpu)).toEqual(["cpu-a", "cpu-b", "cpu-c", "cpu-d"]);
    expect(rows.map((r) => r.rank)).toEqual([1, 2, 3, 4]);
  });

  it("marks lowest, median, and highest rows", () => {
    const rows = tableRows(rankingFixture());
    expect(rows[0]?.highlight).toBe("lowest");
    expect(rows[1]?.highlight).toBe("median");
    expect(rows[2]?.highlight).toBeNull();
    expect(rows[3]?.highlight).toBe("highest");
  });

  it("renders identical markup for identical payloads", () => {
    const a = renderTable(tableRows(rankingFixture()));
    const b = renderTable(tableRows(rankingFixture()));
    expect(a).toBe(b);
    const bodyOrder = [...a.matchAll(/data-key="([^"]+)"/g)].map((m) => m[1]);
    expect(bodyOrder).toEqual([
      "cpu-a|dram-a|hdd-a",
      "cpu-b|dram-a|hdd-a",
      "cpu-c|dram-a|hdd-a",
      "cpu-d|dram-a|hdd-a",
    ]);
  });
});

describe("scatter", () => {
  it("emits one point per assembly with front membership", () => {
    const points = scatterPoints(rankingFixture());
    expect(points).toHaveLength(4);
    expect(points.filter((p) => p.onFront).map((p) => p.key)).toEqual([
      "cpu-a|dram-a|hdd-a",
      "cpu-b|dram-a|hdd-a",
      "cpu-d|dram-a|hdd-a",
    ]);
  });

  it("front polyline keeps the payload's emission-ascending order", () => {
    const line = frontPolyline(rankingFixture());
    expect(line.map((p) => p.y)).toEqual([40000, 55000, 90000]);
  });
});
