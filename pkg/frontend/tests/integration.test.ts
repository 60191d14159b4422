// End-to-end checks against the real service: the what-if badge must
// re-emit /v1/estimate's total for scripted control settings, the
// recovery slider must halve every bar through the service (never
// locally), and the builder table must mirror /v1/assemble's order.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import {
  barData,
  controlsFromSpec,
  leversFromControls,
  specFromControls,
  totalBadge,
  type WhatIfControls,
} from "../src/whatif.js";
import { tableRows } from "../src/builder.js";
import type { HardwareSpecDoc } from "../src/types.js";

const PORT = 8765 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;
const GRAMS = new Intl.NumberFormat("en-US", { maximumFractionDigits: 0 });

let server: ChildProcess | undefined;
let api: ApiClient;
let presetSpec: HardwareSpecDoc;
let profileBody: Record<string, unknown>;

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/v1/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up in time");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "forgetmenot.cli", "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealth();
  api = new ApiClient(BASE);
  presetSpec = (await api.presetBody<HardwareSpecDoc>("spec", "flagship-cpu")).body;
  profileBody = (
    await api.presetBody<Record<string, unknown>>("profile", "intel-oregon-paper")
  ).body;
}, 60_000);

afterAll(() => {
  server?.kill();
});

function profileWithRelease(release: number): Record<string, unknown> {
  return { ...profileBody, release_fraction: release };
}

describe("what-if panel against the live service", () => {
  it("total badge equals /v1/estimate's total for 10 scripted settings", async () => {
    const baseline = controlsFromSpec(presetSpec, 0.9);
    const scripted: Array<Partial<WhatIfControls>> = [
      {},
      { cores: 96 },
      { cores: 64, cacheMb: 96 },
      { nodeNm: 5 },
      { nodeNm: 10, lithography: "duv" },
      { tdpW: 200 },
      { packageMm2: 4000 },
      { releaseFraction: 0.45 },
      { cleanStepMultiplier: 0.5, etchStepMultiplier: 1.5 },
      { cores: 22, cacheMb: 64, lithography: "euv_high_na", releaseFraction: 0.1 },
    ];
    for (const overrides of scripted) {
      const controls = { ...baseline, ...overrides };
      const estimate = await api.estimate({
        spec: specFromControls(presetSpec, controls),
        profile: profileWithRelease(controls.releaseFraction),
      });
      expect(totalBadge(estimate)).toBe(`${GRAMS.format(estimate.total_gco2eq)} gCO2eq`);
      expect(estimate.total_gco2eq).toBeGreaterThan(0);
    }
  }, 30_000);

  it("recovery slider 0.10 -> 0.05 halves every bar", async () => {
    const before = await api.estimate({
      spec: presetSpec,
      profile: profileWithRelease(0.1),
    });
    const baseline = controlsFromSpec(presetSpec, 0.1);
    const moved = { ...baseline, releaseFraction: 0.05 };
    const scenario = await api.scenario({
      spec: presetSpec,
      profile: profileWithRelease(0.1),
      levers: leversFromControls(baseline, moved),
    });
    expect(scenario.total_delta_percent).toBeCloseTo(-50.0, 6);
    const bars = barData(scenario.modified, scenario.baseline);
    for (const bar of bars) {
      expect(bar.ghost).not.toBeNull();
      expect(bar.current).toBeCloseTo((bar.ghost as number) / 2, 6);
    }
    // The ghost overlay is the untouched baseline from the service.
    const baselineBars = barData(before, null);
    bars.forEach((bar, i) => {
      expect(bar.ghost).toBeCloseTo(baselineBars[i]!.current, 6);
    });
  }, 30_000);

  it("switching DUV -> EUV shrinks only the lithography-bearing bars", async () => {
    const duvSpec = { ...presetSpec, lithography: "duv" as const };
    const baseline = controlsFromSpec(duvSpec, 0.9);
    const moved = { ...baseline, lithography: "euv" as const };
    const scenario = await api.scenario({
      spec: duvSpec,
      profile: profileWithRelease(0.9),
      levers: leversFromControls(baseline, moved),
    });
    const phiSources = new Set(["etching", "chamber_cleaning", "photolithography"]);
    for (const bar of barData(scenario.modified, scenario.baseline)) {
      if (phiSources.has(bar.source)) {
        expect(bar.current).toBeLessThan(bar.ghost as number);
      } else {
        expect(bar.current).toBe(bar.ghost);
      }
    }
  }, 30_000);
});

describe("server builder against the live service", () => {
  it("table row order equals the /v1/assemble ranking", async () => {
    const payload = await api.assemble({
      catalog_ref: "fixture-catalog",
      class: "general_purpose",
      pareto: true,
    });
    const rows = tableRows(payload);
    expect(rows.map((r) => `${r.cpu}|${r.dram}|${r.storage}`)).toEqual(
      payload.ranking.map((e) => `${e.cpu}|${e.dram}|${e.storage}`),
    );
    expect(rows.map((r) => r.total)).toEqual(payload.ranking.map((e) => e.total_gco2eq));
    expect(rows[0]?.highlight).toBe("lowest");
    expect(rows[rows.length - 1]?.highlight).toBe("highest");
  }, 30_000);

  it("horizon toggling re-requests without any local recomputation", async () => {
    const y500 = await api.assemble({
      catalog_ref: "fixture-catalog",
      class: "memory_optimized",
      horizon: "y500",
    });
    const y20 = await api.assemble({
      catalog_ref: "fixture-catalog",
      class: "memory_optimized",
      horizon: "y20",
    });
    // The fixture catalog is horizon-uniform, so the order is identical.
    expect(tableRows(y20).map((r) => r.cpu)).toEqual(tableRows(y500).map((r) => r.cpu));
  }, 30_000);
});
