// API document shapes, mirroring the service's JSON envelopes.

export type Point = [number, number];

export interface RoomInfo {
  id: string;
  name: string;
  center: Point;
  area: number;
  last_scan: string | null;
  scan_age_days: number | null;
  hazard: boolean;
}

export interface WallDoc {
  id: string;
  material_class: "standard" | "curtain";
  segments: [Point, Point][];
  thickness: number;
}

export interface DoorDoc {
  id: string;
  center: Point;
  from_room: string;
  to_room: string;
  opening: "push" | "pull";
}

export interface ModelDoc {
  birs_schema: number;
  bounds: [Point, Point];
  rooms: {
    id: string;
    name: string;
    center: Point;
    area: number;
    wall_ids: string[];
    last_scan: string | null;
    hazard: boolean;
  }[];
  walls: WallDoc[];
  doors: DoorDoc[];
}

export interface PathWarning {
  kind: "hazard-on-path" | "no-safe-alternative";
  room_ids: string[];
}

export interface PathDoc {
  semantic_path: string[];
  names: string[];
  x_y_path: Point[];
  total_weight: number;
  warnings: PathWarning[];
}

export interface PlanResponse {
  path: PathDoc;
  waypoints: Point[];
  grid_path: Point[];
}

export interface MissionStartResponse {
  to: string;
  from: string;
  rooms: string[];
  total_weight: number;
  status: string;
}

export interface GridResponse {
  resolution: number;
  origin: Point;
  width: number;
  height: number;
  inflated: boolean;
  pgm_base64: string;
}

export type Weights = Record<string, number>;

export interface StatePayload {
  x: number;
  y: number;
  theta: number;
  v: number;
  omega: number;
  status: string;
  current_room: string;
  mission_active: boolean;
}

export interface TelemetryRecord {
  t: number;
  kind: string; // "state" or an event kind
  payload: Record<string, unknown>;
}

export interface ApiErrorBody {
  kind: string;
  message: string;
}
