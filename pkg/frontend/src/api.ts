// Thin fetch wrappers over the mission service endpoints.
// Every response uses the {ok, data | error} envelope; failures throw ApiError.

import {
  GridResponse,
  MissionStartResponse,
  ModelDoc,
  PlanResponse,
  RoomInfo,
  Weights,
} from "./types.js";

export class ApiError extends Error {
  kind: string;
  status: number;

  constructor(kind: string, message: string, status: number) {
    super(message);
    this.kind = kind;
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  let body: { ok: boolean; data?: T; error?: { kind: string; message: string } };
  try {
    body = await response.json();
  } catch {
    throw new ApiError("BadResponse", `HTTP ${response.status}`, response.status);
  }
  if (!body.ok || body.data === undefined) {
    const err = body.error ?? { kind: "Unknown", message: `HTTP ${response.status}` };
    throw new ApiError(err.kind, err.message, response.status);
  }
  return body.data;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async getModel(): Promise<ModelDoc> {
    return unwrap(await fetch(this.url("/api/model")));
  }

  async getRooms(): Promise<RoomInfo[]> {
    return unwrap(await fetch(this.url("/api/rooms")));
  }

  async getGrid(inflated = false): Promise<GridResponse> {
    return unwrap(await fetch(this.url(`/api/grid?inflated=${inflated}`)));
  }

  async getWeights(): Promise<Weights> {
    return unwrap(await fetch(this.url("/api/weights")));
  }

  async putWeights(weights: Weights): Promise<Weights> {
    return unwrap(await fetch(this.url("/api/weights"), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(weights),
    }));
  }

  async plan(to: string, from?: string): Promise<PlanResponse> {
    const body: Record<string, unknown> = { to };
    if (from) body.from = from;
    return unwrap(await fetch(this.url("/api/plan"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }));
  }

  async setHazard(roomId: string, active: boolean): Promise<void> {
    await unwrap(await fetch(this.url("/api/hazard"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ room_id: roomId, active }),
    }));
  }

  async startMission(to: string): Promise<MissionStartResponse> {
    return unwrap(await fetch(this.url("/api/mission/start"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ to }),
    }));
  }

  async abortMission(): Promise<void> {
    await unwrap(await fetch(this.url("/api/mission/abort"), { method: "POST" }));
  }
}
