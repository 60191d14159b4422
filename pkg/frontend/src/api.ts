// Thin typed client over the /v1 endpoints. Every panel number the UI
// shows comes out of one of these calls.

import type {
  Breakdown,
  Envelope,
  Horizon,
  LeverDoc,
  RankingPayload,
  ScenarioPayload,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ServiceError("offline", `service unreachable: ${String(err)}`, 0);
    }
    const envelope = (await response.json()) as Envelope<T>;
    if (!envelope.ok || envelope.data === undefined) {
      const error = envelope.error ?? { code: "unknown", message: "malformed envelope" };
      throw new ServiceError(error.code, error.message, response.status);
    }
    return envelope.data;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  estimate(body: {
    spec: unknown;
    profile?: unknown;
    profile_ref?: string;
    horizon?: Horizon;
  }): Promise<Breakdown> {
    return this.post("/v1/estimate", body);
  }

  scenario(body: {
    spec: unknown;
    profile?: unknown;
    profile_ref?: string;
    levers: LeverDoc[];
    horizon?: Horizon;
  }): Promise<ScenarioPayload> {
    return this.post("/v1/scenario", body);
  }

  assemble(body: {
    catalog_ref: string;
    class: string;
    horizon?: Horizon;
    pareto?: boolean;
  }): Promise<RankingPayload> {
    return this.post("/v1/assemble", body);
  }

  presetBody<T>(kind: string, name: string): Promise<{ kind: string; name: string; body: T }> {
    return this.request(`/v1/presets/${kind}/${name}`);
  }
}
