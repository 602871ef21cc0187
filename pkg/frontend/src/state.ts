// Pure view-state machine. The server owns all authoritative state; this
// module only folds server responses and telemetry into what the view shows.

import { PlanResponse, RoomInfo, StatePayload, TelemetryRecord, Weights } from "./types.js";

export interface Banner {
  kind: string;
  text: string;
}

export interface LogLine {
  t: number;
  kind: string;
  text: string;
}

export type Connection = "connecting" | "live" | "lost";

export interface ViewState {
  rooms: RoomInfo[];
  selectedRoom: string | null;
  serverWeights: Weights;
  weightDraft: Weights;
  plan: PlanResponse | null;
  pose: StatePayload | null;
  poseStale: boolean;
  missionActive: boolean;
  banners: Banner[];
  log: LogLine[];
  connection: Connection;
}

export const LOG_LIMIT = 200;

export function initialState(): ViewState {
  return {
    rooms: [],
    selectedRoom: null,
    serverWeights: {},
    weightDraft: {},
    plan: null,
    pose: null,
    poseStale: false,
    missionActive: false,
    banners: [],
    log: [],
    connection: "connecting",
  };
}

// Move Robot is gated on a planned path and no running mission.
export function canMoveRobot(state: ViewState): boolean {
  return state.plan !== null && !state.missionActive;
}

export function weightsDirty(state: ViewState): boolean {
  const keys = new Set([...Object.keys(state.serverWeights), ...Object.keys(state.weightDraft)]);
  for (const key of keys) {
    if (state.serverWeights[key] !== state.weightDraft[key]) return true;
  }
  return false;
}

export function selectRoom(state: ViewState, roomId: string | null): ViewState {
  return { ...state, selectedRoom: roomId };
}

export function setRooms(state: ViewState, rooms: RoomInfo[]): ViewState {
  return { ...state, rooms };
}

export function setServerWeights(state: ViewState, weights: Weights): ViewState {
  return { ...state, serverWeights: { ...weights }, weightDraft: { ...weights } };
}

export function editWeight(state: ViewState, key: string, value: number): ViewState {
  return { ...state, weightDraft: { ...state.weightDraft, [key]: value } };
}

export function applyPlan(state: ViewState, plan: PlanResponse): ViewState {
  const banners = plan.path.warnings.map((w) => ({
    kind: w.kind,
    text: w.kind === "no-safe-alternative"
      ? `No safe alternative: hazardous rooms ${w.room_ids.join(", ")} on every route`
      : `Hazard on path: ${w.room_ids.join(", ")}`,
  }));
  return { ...state, plan, banners };
}

export function planFailed(state: ViewState, message: string): ViewState {
  return { ...state, plan: null, banners: [{ kind: "error", text: message }] };
}

export function applyTelemetry(state: ViewState, record: TelemetryRecord): ViewState {
  if (record.kind === "state") {
    const payload = record.payload as unknown as StatePayload;
    return {
      ...state,
      pose: payload,
      poseStale: false,
      missionActive: payload.mission_active,
      connection: "live",
    };
  }
  const line: LogLine = {
    t: record.t,
    kind: record.kind,
    text: `${record.t.toFixed(2)}s ${record.kind} ${JSON.stringify(record.payload)}`,
  };
  let next: ViewState = { ...state, log: [...state.log, line].slice(-LOG_LIMIT), connection: "live" };
  if (record.kind === "warning") {
    const payload = record.payload as { kind?: string; room_ids?: string[] };
    next = {
      ...next,
      banners: [...next.banners, {
        kind: payload.kind ?? "warning",
        text: `Warning: ${payload.kind} (${(payload.room_ids ?? []).join(", ")})`,
      }],
    };
  }
  if (record.kind === "goal-reached" || record.kind === "aborted" || record.kind === "estop") {
    next = { ...next, missionActive: false };
  }
  return next;
}

export function connectionLost(state: ViewState): ViewState {
  return { ...state, connection: "lost", poseStale: true };
}
