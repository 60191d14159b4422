// DOM glue: wires the controls to the service through the view-models.
// All business logic lives server-side; this file only moves payloads
// between fetch responses and the document.

import { ApiClient, ServiceError } from "./api.js";
import { debounce } from "./debounce.js";
import { UndoStack } from "./history.js";
import { SequenceGate } from "./sequence.js";
import type { Breakdown, HardwareSpecDoc, Horizon, RankingPayload } from "./types.js";
import {
  type WhatIfControls,
  barData,
  controlsFromSpec,
  deltaBadge,
  leversFromControls,
  renderBars,
  scenarioBaseSpec,
  specFromControls,
  totalBadge,
} from "./whatif.js";
import { frontPolyline, renderTable, scatterPoints, tableRows } from "./builder.js";

const PROFILE_REF = "intel-oregon-paper";
const SPEC_PRESET = "flagship-cpu";
const RELEASE_DEFAULT = 0.9;

const api = new ApiClient("");
const whatIfGate = new SequenceGate();
const builderGate = new SequenceGate();
const undoStack = new UndoStack<WhatIfControls>(50);

let presetSpec: HardwareSpecDoc | null = null;
let baselineControls: WhatIfControls | null = null;
let controls: WhatIfControls | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setOffline(message: string | null): void {
  const banner = el<HTMLDivElement>("offline-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function readControls(): WhatIfControls {
  const base = controls!;
  return {
    ...base,
    cores: Number(el<HTMLInputElement>("ctl-cores").value),
    cacheMb: Number(el<HTMLInputElement>("ctl-cache").value),
    nodeNm: Number(el<HTMLInputElement>("ctl-node").value),
    lithography: el<HTMLSelectElement>("ctl-lith").value as WhatIfControls["lithography"],
    tdpW: Number(el<HTMLInputElement>("ctl-tdp").value),
    packageMm2: Number(el<HTMLInputElement>("ctl-package").value),
    releaseFraction: Number(el<HTMLInputElement>("ctl-release").value),
    cleanStepMultiplier: Number(el<HTMLInputElement>("ctl-clean-mult").value),
    etchStepMultiplier: Number(el<HTMLInputElement>("ctl-etch-mult").value),
    horizon: el<HTMLSelectElement>("ctl-horizon").value as Horizon,
  };
}

function writeControls(next: WhatIfControls): void {
  el<HTMLInputElement>("ctl-cores").value = String(next.cores);
  el<HTMLInputElement>("ctl-cache").value = String(next.cacheMb);
  el<HTMLInputElement>("ctl-node").value = String(next.nodeNm);
  el<HTMLSelectElement>("ctl-lith").value = next.lithography;
  el<HTMLInputElement>("ctl-tdp").value = String(next.tdpW);
  el<HTMLInputElement>("ctl-package").value = String(next.packageMm2);
  el<HTMLInputElement>("ctl-release").value = String(next.releaseFraction);
  el<HTMLInputElement>("ctl-clean-mult").value = String(next.cleanStepMultiplier);
  el<HTMLInputElement>("ctl-etch-mult").value = String(next.etchStepMultiplier);
  el<HTMLSelectElement>("ctl-horizon").value = next.horizon;
}

async function refreshWhatIf(): Promise<void> {
  if (!presetSpec || !controls || !baselineControls) return;
  const seq = whatIfGate.next();
  const spec = specFromControls(presetSpec, controls);
  const levers = leversFromControls(baselineControls, controls);
  try {
    const release = controls.releaseFraction;
    const horizon = controls.horizon;
    const [estimate, scenario] = await Promise.all([
      api.estimate({
        spec,
        profile: profileWithRelease(release),
        horizon,
      }),
      api.scenario({
        spec: scenarioBaseSpec(presetSpec, controls),
        profile: profileWithRelease(baselineControls.releaseFraction),
        levers,
        horizon,
      }),
    ]);
    if (!whatIfGate.accept(seq)) return; // stale; a newer request is in flight
    setOffline(null);
    el<HTMLSpanElement>("total-badge").textContent = totalBadge(estimate);
    el<HTMLSpanElement>("delta-badge").textContent = deltaBadge(scenario);
    el<HTMLDivElement>("bars").innerHTML = renderBars(
      barData(estimate, scenario.baseline),
    );
  } catch (err) {
    if (!whatIfGate.accept(seq)) return;
    if (err instanceof ServiceError && err.code === "offline") {
      setOffline("Service unreachable; controls stay usable, numbers are stale.");
    } else if (err instanceof ServiceError) {
      setOffline(`Service error: ${err.message}`);
    } else {
      setOffline(String(err));
    }
  }
}

let profileBody: Record<string, unknown> | null = null;

function profileWithRelease(release: number): Record<string, unknown> {
  return { ...profileBody!, release_fraction: release };
}

const debouncedRefresh = debounce(() => void refreshWhatIf(), 150);

function onControlInput(): void {
  if (!controls) return;
  undoStack.push(controls);
  controls = readControls();
  el<HTMLButtonElement>("btn-undo").disabled = undoStack.size === 0;
  debouncedRefresh();
}

function onUndo(): void {
  const previous = undoStack.undo();
  if (!previous) return;
  controls = previous;
  writeControls(previous);
  el<HTMLButtonElement>("btn-undo").disabled = undoStack.size === 0;
  debouncedRefresh();
}

async function refreshBuilder(): Promise<void> {
  const seq = builderGate.next();
  const klass = el<HTMLSelectElement>("ctl-class").value;
  const horizon = el<HTMLSelectElement>("ctl-builder-horizon").value as Horizon;
  try {
    const payload = await api.assemble({
      catalog_ref: "fixture-catalog",
      class: klass,
      horizon,
      pareto: true,
    });
    if (!builderGate.accept(seq)) return;
    setOffline(null);
    renderBuilder(payload);
  } catch (err) {
    if (!builderGate.accept(seq)) return;
    setOffline(err instanceof ServiceError ? `Service error: ${err.message}` : String(err));
  }
}

function renderBuilder(payload: RankingPayload): void {
  const table = el<HTMLTableElement>("ranking-table");
  table.innerHTML = renderTable(tableRows(payload));
  drawScatter(payload);
  for (const row of table.querySelectorAll("tbody tr")) {
    row.addEventListener("click", () => {
      const key = (row as HTMLTableRowElement).dataset["key"];
      if (key) void pushAssemblyIntoWhatIf(key.split("|")[0] ?? "");
    });
  }
}

async function pushAssemblyIntoWhatIf(cpuId: string): Promise<void> {
  // Selecting a row feeds its CPU into the what-if panel: the feedback
  // loop between the two panels.
  const catalog = await api.presetBody<{ components: Array<Record<string, unknown>> }>(
    "catalog",
    "fixture-catalog",
  );
  const component = catalog.body.components.find((c) => c["id"] === cpuId);
  if (!component) return;
  presetSpec = component["spec"] as HardwareSpecDoc;
  baselineControls = controlsFromSpec(presetSpec, RELEASE_DEFAULT, controls?.horizon ?? "y500");
  undoStack.clear();
  controls = { ...baselineControls };
  writeControls(controls);
  debouncedRefresh.flush();
  debouncedRefresh();
}

function drawScatter(payload: RankingPayload): void {
  const svg = el<HTMLElement>("scatter");
  const points = scatterPoints(payload);
  const front = frontPolyline(payload);
  if (points.length === 0) {
    svg.innerHTML = "";
    return;
  }
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const [xMin, xMax] = [Math.min(...xs), Math.max(...xs)];
  const [yMin, yMax] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x: number) => 30 + ((x - xMin) / (xMax - xMin || 1)) * 340;
  const sy = (y: number) => 180 - ((y - yMin) / (yMax - yMin || 1)) * 160;
  const dots = points
    .map(
      (p) =>
        `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="3" ` +
        `class="${p.onFront ? "front" : "dot"}"><title>${p.key}</title></circle>`,
    )
    .join("");
  const line =
    front.length > 1
      ? `<polyline points="${front
          .map((p) => `${sx(p.x).toFixed(1)},${sy(p.y).toFixed(1)}`)
          .join(" ")}" class="front-line"/>`
      : "";
  svg.innerHTML = line + dots;
}

async function boot(): Promise<void> {
  try {
    const [specPreset, profilePreset] = await Promise.all([
      api.presetBody<HardwareSpecDoc>("spec", SPEC_PRESET),
      api.presetBody<Record<string, unknown>>("profile", PROFILE_REF),
    ]);
    presetSpec = specPreset.body;
    profileBody = profilePreset.body;
    baselineControls = controlsFromSpec(presetSpec, RELEASE_DEFAULT);
    controls = { ...baselineControls };
    writeControls(controls);
    await refreshWhatIf();
    await refreshBuilder();
  } catch (err) {
    setOffline(`Cannot reach the service: ${String(err)}`);
  }

  for (const id of [
    "ctl-cores",
    "ctl-cache",
    "ctl-node",
    "ctl-lith",
    "ctl-tdp",
    "ctl-package",
    "ctl-release",
    "ctl-clean-mult",
    "ctl-etch-mult",
    "ctl-horizon",
  ]) {
    el(id).addEventListener("input", onControlInput);
  }
  el("btn-undo").addEventListener("click", onUndo);
  el("ctl-class").addEventListener("input", () => void refreshBuilder());
  el("ctl-builder-horizon").addEventListener("input", () => void refreshBuilder());
}

void boot();
