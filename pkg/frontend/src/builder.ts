// Server-builder view-model: ranking table rows and the emissions vs
// performance scatter, both straight re-emissions of the /v1/assemble
// payload in its own order.

import type { AssemblyEntry, RankingPayload } from "./types.js";
import { formatGrams } from "./whatif.js";

export type RowHighlight = "lowest" | "median" | "highest" | null;

export interface TableRow {
  rank: number;
  cpu: string;
  dram: string;
  storage: string;
  total: number;
  performance: number;
  highlight: RowHighlight;
}

function sameAssembly(a: AssemblyEntry, b: AssemblyEntry): boolean {
  return a.cpu === b.cpu && a.dram === b.dram && a.storage === b.storage;
}

/** Table rows in the service's ranking order, extremes marked. */
export function tableRows(payload: RankingPayload): TableRow[] {
  return payload.ranking.map((entry, index) => {
    let highlight: RowHighlight = null;
    if (sameAssembly(entry, payload.lowest)) highlight = "lowest";
    else if (sameAssembly(entry, payload.median)) highlight = "median";
    else if (sameAssembly(entry, payload.highest)) highlight = "highest";
    return {
      rank: entry.rank ?? index + 1,
      cpu: entry.cpu,
      dram: entry.dram,
      storage: entry.storage,
      total: entry.total_gco2eq,
      performance: entry.performance,
      highlight,
    };
  });
}

export interface ScatterPoint {
  x: number; // performance score
  y: number; // total gCO2eq
  key: string;
  onFront: boolean;
}

export function scatterPoints(payload: RankingPayload): ScatterPoint[] {
  const front = new Set(
    (payload.pareto_front ?? []).map((entry) => `${entry.cpu}|${entry.dram}|${entry.storage}`),
  );
  return payload.ranking.map((entry) => {
    const key = `${entry.cpu}|${entry.dram}|${entry.storage}`;
    return { x: entry.performance, y: entry.total_gco2eq, key, onFront: front.has(key) };
  });
}

/** Pareto polyline in the payload's front order (emissions ascending). */
export function frontPolyline(payload: RankingPayload): Array<{ x: number; y: number }> {
  return (payload.pareto_front ?? []).map((entry) => ({
    x: entry.performance,
    y: entry.total_gco2eq,
  }));
}

/** Deterministic table markup; identical payloads yield identical HTML. */
export function renderTable(rows: TableRow[]): string {
  const body = rows.map((row) => {
    const cls = row.highlight ? ` class="${row.highlight}"` : "";
    return (
      `<tr${cls} data-key="${row.cpu}|${row.dram}|${row.storage}">` +
      `<td>${row.rank}</td><td>${row.cpu}</td><td>${row.dram}</td>` +
      `<td>${row.storage}</td><td>${formatGrams(row.total)}</td>` +
      `<td>${row.performance.toFixed(2)}</td></tr>`
    );
  });
  return (
    "<thead><tr><th>#</th><th>CPU</th><th>DRAM</th><th>Storage</th>" +
    "<th>Total</th><th>Perf</th></tr></thead>\n<tbody>" +
    body.join("\n") +
    "</tbody>"
  );
}
