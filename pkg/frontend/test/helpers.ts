// Recording canvas fake and small fixtures shared by the UI tests.

import { Canvas2D } from "../src/render.js";
import { ModelDoc } from "../src/types.js";

export interface DrawOp {
  op: string;
  args: number[];
  fillStyle: string;
  strokeStyle: string;
  dash: number[];
  text?: string;
}

export class RecordingCtx implements Canvas2D {
  fillStyle: string = "";
  strokeStyle: string = "";
  lineWidth = 1;
  font = "";
  textAlign = "";
  globalAlpha = 1;
  private dash: number[] = [];
  ops: DrawOp[] = [];

  private record(op: string, args: number[] = [], text?: string): void {
    this.ops.push({
      op,
      args,
      fillStyle: String(this.fillStyle),
      strokeStyle: String(this.strokeStyle),
      dash: [...this.dash],
      text,
    });
  }

  beginPath(): void { this.record("beginPath"); }
  closePath(): void { this.record("closePath"); }
  moveTo(x: number, y: number): void { this.record("moveTo", [x, y]); }
  lineTo(x: number, y: number): void { this.record("lineTo", [x, y]); }
  arc(x: number, y: number, r: number, a0: number, a1: number): void {
    this.record("arc", [x, y, r, a0, a1]);
  }
  rect(x: number, y: number, w: number, h: number): void { this.record("rect", [x, y, w, h]); }
  fill(): void { this.record("fill"); }
  stroke(): void { this.record("stroke"); }
  fillRect(x: number, y: number, w: number, h: number): void { this.record("fillRect", [x, y, w, h]); }
  clearRect(x: number, y: number, w: number, h: number): void { this.record("clearRect", [x, y, w, h]); }
  fillText(text: string, x: number, y: number): void { this.record("fillText", [x, y], text); }
  setLineDash(segments: number[]): void { this.dash = [...segments]; }

  lastFrame(): DrawOp[] {
    const start = this.ops.map((o) => o.op).lastIndexOf("clearRect");
    return start >= 0 ? this.ops.slice(start) : [...this.ops];
  }
}

export const TINY_MODEL: ModelDoc = {
  birs_schema: 1,
  bounds: [[0, 0], [10, 5]],
  rooms: [
    { id: "A", name: "Alpha", center: [2, 2.5], area: 20, wall_ids: ["W1"], last_scan: null, hazard: false },
    { id: "B", name: "Beta", center: [8, 2.5], area: 20, wall_ids: ["W2"], last_scan: null, hazard: false },
  ],
  walls: [
    { id: "W1", material_class: "standard", segments: [[[0, 0], [10, 0]]], thickness: 0.2 },
    { id: "W2", material_class: "curtain", segments: [[[0, 5], [10, 5]]], thickness: 0.2 },
  ],
  doors: [
    { id: "D1", center: [5, 2.5], from_room: "A", to_room: "B", opening: "push" },
  ],
};
