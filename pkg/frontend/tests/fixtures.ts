// Hand-built payload fixtures shaped exactly like the service's JSON.

import type { Breakdown, RankingPayload, ScenarioPayload } from "../src/types.js";
import { SOURCE_IDS } from "../src/types.js";

export function breakdownFixture(scale = 1): Breakdown {
  return {
    spec: {
      kind: "cpu",
      node_nm: 7,
      lithography: "euv",
      features: { cores: 112, cache_mb: 168 },
      tdp_w: 300,
      package_size_mm2: 2500,
    },
    profile: "intel-oregon-paper",
    horizon: "y500",
    sources: SOURCE_IDS.map((source, index) => ({
      source,
      usage_g_per_wafer: (index + 1) * 0.5,
      wafers_per_unit: 0.0425,
      release_fraction: 0.9,
      gwp: 10000,
      emission_gco2eq: (index + 1) * 1000 * scale,
    })),
    total_gco2eq: SOURCE_IDS.reduce((acc, _s, i) => acc + (i + 1) * 1000 * scale, 0),
  };
}

export function scenarioFixture(): ScenarioPayload {
  const baseline = breakdownFixture(1);
  const modified = breakdownFixture(0.5);
  return {
    baseline,
    modified,
    levers: [{ type: "recovery_change", release_fraction: 0.45 }],
    per_source_delta_gco2eq: Object.fromEntries(
      SOURCE_IDS.map((s, i) => [s, -(i + 1) * 500]),
    ) as ScenarioPayload["per_source_delta_gco2eq"],
    total_delta_gco2eq: -0.5 * baseline.total_gco2eq,
    total_delta_percent: -50.0,
  };
}

export function rankingFixture(): RankingPayload {
  const mk = (
    cpu: string,
    total: number,
    performance: number,
    rank: number,
  ): RankingPayload["ranking"][number] => ({
    rank,
    cpu,
    dram: "dram-a",
    storage: "hdd-a",
    embodied_total_gco2eq: total / 2,
    fluorinated_total_gco2eq: total / 2,
    total_gco2eq: total,
    performance,
  });
  const ranking = [
    mk("cpu-a", 40000, 1.0, 1),
    mk("cpu-b", 55000, 2.5, 2),
    mk("cpu-c", 70000, 2.0, 3),
    mk("cpu-d", 90000, 3.0, 4),
  ];
  return {
    class: "general_purpose",
    horizon: "y500",
    count: ranking.length,
    lowest: ranking[0]!,
    median: ranking[1]!,
    highest: ranking[3]!,
    ranking,
    pareto_front: [ranking[0]!, ranking[1]!, ranking[3]!],
  };
}
