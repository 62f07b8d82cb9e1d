// Typed client for the phedra service. Every call unwraps the
// {ok, data|error} envelope; rejected responses surface the error payload
// so the UI can show it verbatim.

import type {
  ApiError,
  FlatcheckPayload,
  FramesPayload,
  IntervalInfo,
  MeshPayload,
  ModelCreated,
  ModelFile,
  Report,
  TubePayload,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly payload: ApiError,
  ) {
    super(`${payload.code}: ${payload.message}`);
  }

  /** Validation report attached to a 422 model rejection, if any. */
  get report(): Report | null {
    const details = this.payload.details as Report | undefined;
    if (details && Array.isArray(details.violations)) return details;
    return null;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private async unwrap<T>(resp: Response): Promise<T> {
    const body = await resp.json();
    if (!resp.ok || !body.ok) {
      throw new ServiceError(resp.status, body.error ?? {
        code: "UnknownError",
        message: `status ${resp.status}`,
      });
    }
    return body.data as T;
  }

  async createModel(model: ModelFile): Promise<ModelCreated> {
    const resp = await this.fetchImpl(`${this.base}/api/models`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(model),
    });
    return this.unwrap<ModelCreated>(resp);
  }

  async getMesh(id: string, t: number, flips: number[]): Promise<MeshPayload> {
    const qs = new URLSearchParams({ t: String(t) });
    if (flips.length) qs.set("flip", flips.join(","));
    const resp = await this.fetchImpl(
      `${this.base}/api/models/${id}/mesh?${qs}`,
    );
    return this.unwrap<MeshPayload>(resp);
  }

  async getLimits(id: string, flips: number[]): Promise<IntervalInfo> {
    const qs = flips.length ? `?flip=${flips.join(",")}` : "";
    const resp = await this.fetchImpl(
      `${this.base}/api/models/${id}/limits${qs}`,
    );
    return this.unwrap<IntervalInfo>(resp);
  }

  async getFrames(
    id: string,
    count: number,
    flips: number[],
  ): Promise<FramesPayload> {
    const qs = new URLSearchParams({ count: String(count) });
    if (flips.length) qs.set("flip", flips.join(","));
    const resp = await this.fetchImpl(
      `${this.base}/api/models/${id}/frames?${qs}`,
    );
    return this.unwrap<FramesPayload>(resp);
  }

  async getFlatcheck(id: string): Promise<FlatcheckPayload> {
    const resp = await this.fetchImpl(
      `${this.base}/api/models/${id}/flatcheck`,
    );
    return this.unwrap<FlatcheckPayload>(resp);
  }

  async getTube(id: string): Promise<TubePayload> {
    const resp = await this.fetchImpl(`${this.base}/api/models/${id}/tube`);
    return this.unwrap<TubePayload>(resp);
  }

  async deleteModel(id: string): Promise<void> {
    const resp = await this.fetchImpl(`${this.base}/api/models/${id}`, {
      method: "DELETE",
    });
    await this.unwrap(resp);
  }
}
