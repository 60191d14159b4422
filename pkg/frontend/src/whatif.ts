// What-if panel view-model: control state, lever derivation against the
// loaded baseline, and deterministic rendering of the service's numbers.
// No emission value is ever computed here; bars and badges re-emit the
// payload's own figures (pixel scaling is the only local arithmetic).

import type {
  Breakdown,
  HardwareSpecDoc,
  Horizon,
  LeverDoc,
  Lithography,
  ScenarioPayload,
  SourceId,
} from "./types.js";
import { SOURCE_IDS } from "./types.js";

export interface WhatIfControls {
  cores: number;
  cacheMb: number;
  nodeNm: number;
  lithography: Lithography;
  tdpW: number;
  packageMm2: number;
  releaseFraction: number;
  cleanStepMultiplier: number;
  etchStepMultiplier: number;
  horizon: Horizon;
}

export function controlsFromSpec(
  spec: HardwareSpecDoc,
  releaseFraction: number,
  horizon: Horizon = "y500",
): WhatIfControls {
  return {
    cores: spec.features["cores"] ?? 0,
    cacheMb: spec.features["cache_mb"] ?? 0,
    nodeNm: spec.node_nm,
    lithography: spec.lithography,
    tdpW: spec.tdp_w,
    packageMm2: spec.package_size_mm2,
    releaseFraction,
    cleanStepMultiplier: 1.0,
    etchStepMultiplier: 1.0,
    horizon,
  };
}

/** Spec document for the current controls; sent to /v1/estimate. */
export function specFromControls(base: HardwareSpecDoc, controls: WhatIfControls): HardwareSpecDoc {
  return {
    ...base,
    node_nm: controls.nodeNm,
    lithography: controls.lithography,
    features: { ...base.features, cores: controls.cores, cache_mb: controls.cacheMb },
    tdp_w: controls.tdpW,
    package_size_mm2: controls.packageMm2,
  };
}

/**
 * Levers expressing the delta between the baseline controls and the
 * current ones; sent to /v1/scenario so the service computes the
 * before/after pair and the delta badge.
 */
export function leversFromControls(
  baseline: WhatIfControls,
  controls: WhatIfControls,
): LeverDoc[] {
  const levers: LeverDoc[] = [];
  if (controls.cores !== baseline.cores || controls.cacheMb !== baseline.cacheMb) {
    levers.push({
      type: "core_cache_interchange",
      delta_cores: controls.cores - baseline.cores,
      delta_cache_mb: controls.cacheMb - baseline.cacheMb,
    });
  }
  if (
    controls.cleanStepMultiplier !== baseline.cleanStepMultiplier ||
    controls.etchStepMultiplier !== baseline.etchStepMultiplier
  ) {
    levers.push({
      type: "clean_etch_rebalance",
      clean_step_multiplier: controls.cleanStepMultiplier,
      etch_step_multiplier: controls.etchStepMultiplier,
    });
  }
  if (controls.releaseFraction !== baseline.releaseFraction) {
    levers.push({ type: "recovery_change", release_fraction: controls.releaseFraction });
  }
  if (controls.lithography !== baseline.lithography) {
    levers.push({ type: "lithography_switch", to: controls.lithography });
  }
  return levers;
}

// Node size, TDP, and package edits have no lever form; they are applied
// to the scenario's base spec instead, so the ghost overlay reflects them
// on both sides while levers carry the rest.
export function scenarioBaseSpec(
  presetSpec: HardwareSpecDoc,
  controls: WhatIfControls,
): HardwareSpecDoc {
  return {
    ...presetSpec,
    node_nm: controls.nodeNm,
    tdp_w: controls.tdpW,
    package_size_mm2: controls.packageMm2,
  };
}

export interface BarDatum {
  source: SourceId;
  current: number;
  ghost: number | null;
  widthPct: number;
  ghostWidthPct: number;
}

/**
 * Bar geometry for the stacked per-source chart. Values are taken
 * verbatim from the breakdowns; widths scale them into [0, 100] for CSS.
 */
export function barData(current: Breakdown, ghost: Breakdown | null): BarDatum[] {
  const rows = new Map(current.sources.map((row) => [row.source, row.emission_gco2eq]));
  const ghostRows = ghost
    ? new Map(ghost.sources.map((row) => [row.source, row.emission_gco2eq]))
    : null;
  let scale = 0;
  for (const value of rows.values()) scale = Math.max(scale, value);
  if (ghostRows) for (const value of ghostRows.values()) scale = Math.max(scale, value);
  return SOURCE_IDS.map((source) => {
    const value = rows.get(source) ?? 0;
    const ghostValue = ghostRows ? (ghostRows.get(source) ?? 0) : null;
    return {
      source,
      current: value,
      ghost: ghostValue,
      widthPct: scale > 0 ? (value / scale) * 100 : 0,
      ghostWidthPct: scale > 0 && ghostValue !== null ? (ghostValue / scale) * 100 : 0,
    };
  });
}

const GRAM_FORMAT = new Intl.NumberFormat("en-US", { maximumFractionDigits: 0 });

export function formatGrams(value: number): string {
  return `${GRAM_FORMAT.format(value)} gCO2eq`;
}

/** Total badge text: exactly the estimate payload's total. */
export function totalBadge(breakdown: Breakdown): string {
  return formatGrams(breakdown.total_gco2eq);
}

/** Delta badge text: exactly the scenario payload's percent figure. */
export function deltaBadge(scenario: ScenarioPayload): string {
  const pct = scenario.total_delta_percent;
  const sign = pct > 0 ? "+" : "";
  return `${sign}${pct.toFixed(1)}% vs baseline`;
}

/** Deterministic HTML for the bar chart; identical payloads yield identical markup. */
export function renderBars(data: BarDatum[]): string {
  const rows = data.map((bar) => {
    const ghost =
      bar.ghost !== null
        ? `<div class="bar ghost" style="width:${bar.ghostWidthPct.toFixed(3)}%"></div>`
        : "";
    return (
      `<div class="bar-row" data-source="${bar.source}">` +
      `<span class="bar-label">${bar.source}</span>` +
      `<div class="bar-track">${ghost}` +
      `<div class="bar current" style="width:${bar.widthPct.toFixed(3)}%"></div></div>` +
      `<span class="bar-value">${formatGrams(bar.current)}</span>` +
      `</div>`
    );
  });
  return rows.join("\n");
}
