// Canvas floor-plan rendering: vector walls, planned path, live robot arrow.
// Drawing goes through the Canvas2D subset below so tests can record calls.

import { ModelDoc, PlanResponse, Point, StatePayload } from "./types.js";

export interface Canvas2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: string;
  globalAlpha: number;
  beginPath(): void;
  closePath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fill(): void;
  stroke(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
}

export interface MapTransform {
  scale: number; // px per meter, uniform
  offsetX: number;
  offsetY: number;
  heightPx: number;
}

const MARGIN_PX = 12;

export function fitTransform(bounds: [Point, Point], widthPx: number, heightPx: number): MapTransform {
  const [lo, hi] = bounds;
  const spanX = hi[0] - lo[0];
  const spanY = hi[1] - lo[1];
  const scale = Math.min((widthPx - 2 * MARGIN_PX) / spanX, (heightPx - 2 * MARGIN_PX) / spanY);
  return {
    scale,
    offsetX: MARGIN_PX - lo[0] * scale,
    offsetY: MARGIN_PX - lo[1] * scale,
    heightPx,
  };
}

// World is x-right / y-up with the origin at the bounds' lower-left; the
// canvas y axis points down, so y flips here and only here.
export function toPx(t: MapTransform, p: Point): Point {
  return [p[0] * t.scale + t.offsetX, t.heightPx - (p[1] * t.scale + t.offsetY)];
}

export interface Scene {
  model: ModelDoc;
  plan: PlanResponse | null;
  pose: StatePayload | null;
  poseStale: boolean;
  selectedRoom: string | null;
  gridOverlay: { origin: Point; resolution: number; cells: Point[] } | null;
}

export function renderMap(ctx: Canvas2D, scene: Scene, widthPx: number, heightPx: number): MapTransform {
  const t = fitTransform(scene.model.bounds, widthPx, heightPx);
  ctx.clearRect(0, 0, widthPx, heightPx);
  ctx.fillStyle = "#fafaf7";
  ctx.fillRect(0, 0, widthPx, heightPx);

  if (scene.gridOverlay) {
    drawGridOverlay(ctx, t, scene.gridOverlay);
  }
  drawRooms(ctx, t, scene);
  drawWalls(ctx, t, scene.model);
  drawDoors(ctx, t, scene.model);
  if (scene.plan) {
    drawPlan(ctx, t, scene.plan);
  }
  if (scene.pose) {
    drawRobot(ctx, t, scene.pose, scene.poseStale);
  }
  return t;
}

function drawGridOverlay(ctx: Canvas2D, t: MapTransform, overlay: NonNullable<Scene["gridOverlay"]>): void {
  const size = overlay.resolution * t.scale;
  ctx.globalAlpha = 0.25;
  ctx.fillStyle = "#b91c1c";
  for (const [ix, iy] of overlay.cells) {
    const [px, py] = toPx(t, [
      overlay.origin[0] + ix * overlay.resolution,
      overlay.origin[1] + (iy + 1) * overlay.resolution,
    ]);
    ctx.fillRect(px, py, size, size);
  }
  ctx.globalAlpha = 1.0;
}

function drawRooms(ctx: Canvas2D, t: MapTransform, scene: Scene): void {
  ctx.font = "12px sans-serif";
  ctx.textAlign = "center";
  for (const room of scene.model.rooms) {
    const [px, py] = toPx(t, room.center);
    if (room.hazard) {
      ctx.fillStyle = "rgba(220, 38, 38, 0.15)";
      ctx.beginPath();
      ctx.arc(px, py, 0.9 * t.scale, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.fillStyle = room.id === scene.selectedRoom ? "#1d4ed8" : "#6b7280";
    ctx.fillText(room.hazard ? `${room.name} ⚠` : room.name, px, py - 8);
  }
}

function drawWalls(ctx: Canvas2D, t: MapTransform, model: ModelDoc): void {
  for (const wall of model.walls) {
    const curtain = wall.material_class === "curtain";
    ctx.strokeStyle = curtain ? "#0ea5e9" : "#1f2937";
    ctx.lineWidth = Math.max(2, wall.thickness * t.scale);
    ctx.setLineDash(curtain ? [6, 4] : []);
    for (const [a, b] of wall.segments) {
      const [ax, ay] = toPx(t, a);
      const [bx, by] = toPx(t, b);
      ctx.beginPath();
      ctx.moveTo(ax, ay);
      ctx.lineTo(bx, by);
      ctx.stroke();
    }
  }
  ctx.setLineDash([]);
}

function drawDoors(ctx: Canvas2D, t: MapTransform, model: ModelDoc): void {
  ctx.fillStyle = "#92400e";
  for (const door of model.doors) {
    const [px, py] = toPx(t, door.center);
    ctx.beginPath();
    ctx.rect(px - 3, py - 3, 6, 6);
    ctx.fill();
  }
}

export const WAYPOINT_COLOR = "#eab308"; // the yellow circles along the path
export const ROBOT_COLOR = "#7c3aed";    // the purple arrow

function drawPlan(ctx: Canvas2D, t: MapTransform, plan: PlanResponse): void {
  if (plan.grid_path.length > 1) {
    ctx.strokeStyle = "#16a34a";
    ctx.lineWidth = 2;
    ctx.beginPath();
    const [sx, sy] = toPx(t, plan.grid_path[0]);
    ctx.moveTo(sx, sy);
    for (const p of plan.grid_path.slice(1)) {
      const [px, py] = toPx(t, p);
      ctx.lineTo(px, py);
    }
    ctx.stroke();
  }
  ctx.fillStyle = WAYPOINT_COLOR;
  for (const wp of plan.waypoints) {
    const [px, py] = toPx(t, wp);
    ctx.beginPath();
    ctx.arc(px, py, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawRobot(ctx: Canvas2D, t: MapTransform, pose: StatePayload, stale: boolean): void {
  const [px, py] = toPx(t, [pose.x, pose.y]);
  const heading = -pose.theta; // canvas y points down
  const size = 10;
  ctx.fillStyle = stale ? "#9ca3af" : ROBOT_COLOR;
  ctx.beginPath();
  ctx.moveTo(px + size * Math.cos(heading), py + size * Math.sin(heading));
  ctx.lineTo(px + size * Math.cos(heading + 2.5), py + size * Math.sin(heading + 2.5));
  ctx.lineTo(px + size * Math.cos(heading - 2.5), py + size * Math.sin(heading - 2.5));
  ctx.closePath();
  ctx.fill();
  if (stale) {
    ctx.font = "10px sans-serif";
    ctx.fillText("stale", px, py - 12);
  }
}
