// Payload shapes mirroring the service's JSON documents. The UI renders
// these values verbatim; it never computes an emission number itself.

export const SOURCE_IDS = [
  "etching",
  "chamber_cleaning",
  "photolithography",
  "heat_transfer_fluids",
  "solvent_fluids",
  "dielectric_fluids",
  "wafer_thinning",
  "testing",
  "vapor_phase_soldering",
  "vacuum_pumps",
  "plasma_coatings",
  "packaging",
] as const;

export type SourceId = (typeof SOURCE_IDS)[number];

export type Lithography = "duv" | "euv" | "euv_high_na";
export type Horizon = "y20" | "y100" | "y500";

export interface HardwareSpecDoc {
  kind: "cpu" | "dram" | "storage";
  node_nm: number;
  lithography: Lithography;
  features: Record<string, number>;
  tdp_w: number;
  package_size_mm2: number;
}

export interface SourceRow {
  source: SourceId;
  usage_g_per_wafer: number;
  wafers_per_unit: number;
  release_fraction: number;
  gwp: number;
  emission_gco2eq: number;
}

export interface Breakdown {
  spec: HardwareSpecDoc;
  profile: string;
  horizon: Horizon;
  sources: SourceRow[];
  total_gco2eq: number;
}

export interface ScenarioPayload {
  baseline: Breakdown;
  modified: Breakdown;
  levers: LeverDoc[];
  per_source_delta_gco2eq: Record<SourceId, number>;
  total_delta_gco2eq: number;
  total_delta_percent: number;
}

export type LeverDoc =
  | { type: "core_cache_interchange"; delta_cores: number; delta_cache_mb: number }
  | {
      type: "clean_etch_rebalance";
      clean_step_multiplier: number;
      etch_step_multiplier: number;
    }
  | { type: "recovery_change"; release_fraction: number }
  | { type: "lithography_switch"; to: Lithography };

export interface AssemblyEntry {
  rank?: number;
  cpu: string;
  dram: string;
  storage: string;
  embodied_total_gco2eq: number;
  fluorinated_total_gco2eq: number;
  total_gco2eq: number;
  performance: number;
}

export interface RankingPayload {
  class: string;
  horizon: Horizon;
  count: number;
  lowest: AssemblyEntry;
  median: AssemblyEntry;
  highest: AssemblyEntry;
  ranking: AssemblyEntry[];
  pareto_front?: AssemblyEntry[];
}

export interface Envelope<T> {
  ok: boolean;
  data?: T;
  content_hash?: string;
  error?: { code: string; message: string; detail?: string | null };
}
