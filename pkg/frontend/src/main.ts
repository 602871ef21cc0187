// Operator console: destination selection, live map, room attributes,
// weight reconfiguration, hazard toggling, and Move Robot dispatch.
// All authoritative state lives on the server; see state.ts.

import { ApiClient, ApiError } from "./api.js";
import { Canvas2D, renderMap, Scene } from "./render.js";
import {
  applyPlan,
  applyTelemetry,
  canMoveRobot,
  connectionLost,
  editWeight,
  initialState,
  planFailed,
  selectRoom,
  setRooms,
  setServerWeights,
  ViewState,
  weightsDirty,
} from "./state.js";
import { subscribeTelemetry, TelemetrySubscription } from "./telemetry.js";
import { ModelDoc, Point } from "./types.js";

const PAGE = `
  <header class="toolbar">
    <label>Destination
      <select id="destination"><option value="">select a room…</option></select>
    </label>
    <button id="plan">Plan Path</button>
    <button id="move" disabled>Move Robot</button>
    <button id="abort">Abort</button>
    <label class="overlay-toggle"><input type="checkbox" id="grid-overlay"> occupancy overlay</label>
    <span id="connection" class="pill">connecting</span>
    <span id="total-weight"></span>
  </header>
  <div id="banners"></div>
  <main class="columns">
    <aside id="room-panel" class="panel">
      <h2>Room</h2>
      <div id="room-attrs">Select a room to inspect it.</div>
      <button id="hazard-toggle" hidden>Toggle hazard</button>
    </aside>
    <section class="map-wrap">
      <canvas id="map" width="900" height="520"></canvas>
    </section>
    <aside id="weight-panel" class="panel">
      <h2>Weights <span id="weights-unsaved" hidden>(unsaved)</span></h2>
      <div id="weight-fields"></div>
      <button id="save-weights">Save weights</button>
      <div id="weight-error" class="error" hidden></div>
    </aside>
  </main>
  <section class="panel">
    <h2>Mission log</h2>
    <pre id="log"></pre>
  </section>
`;

export interface ConsoleOptions {
  base?: string;
  createContext?: (canvas: HTMLCanvasElement) => Canvas2D;
  reconnectDelayMs?: number;
}

export interface ConsoleHandle {
  state(): ViewState;
  planAndPreview(): Promise<void>;
  moveRobot(): Promise<void>;
  selectDestination(roomId: string): void;
  setWeightField(key: string, value: number): void;
  toggleHazard(roomId: string): Promise<void>;
  refresh(): Promise<void>;
  renderCount(): number;
  dispose(): void;
}

export async function createConsole(root: HTMLElement, options: ConsoleOptions = {}): Promise<ConsoleHandle> {
  const api = new ApiClient(options.base ?? "");
  root.innerHTML = PAGE;

  const el = {
    destination: root.querySelector("#destination") as HTMLSelectElement,
    plan: root.querySelector("#plan") as HTMLButtonElement,
    move: root.querySelector("#move") as HTMLButtonElement,
    abort: root.querySelector("#abort") as HTMLButtonElement,
    overlay: root.querySelector("#grid-overlay") as HTMLInputElement,
    connection: root.querySelector("#connection") as HTMLSpanElement,
    totalWeight: root.querySelector("#total-weight") as HTMLSpanElement,
    banners: root.querySelector("#banners") as HTMLDivElement,
    roomAttrs: root.querySelector("#room-attrs") as HTMLDivElement,
    hazardToggle: root.querySelector("#hazard-toggle") as HTMLButtonElement,
    weightFields: root.querySelector("#weight-fields") as HTMLDivElement,
    saveWeights: root.querySelector("#save-weights") as HTMLButtonElement,
    weightError: root.querySelector("#weight-error") as HTMLDivElement,
    log: root.querySelector("#log") as HTMLPreElement,
    canvas: root.querySelector("#map") as HTMLCanvasElement,
  };

  const ctx = options.createContext
    ? options.createContext(el.canvas)
    : (el.canvas.getContext("2d") as unknown as Canvas2D);

  let state = initialState();
  let model: ModelDoc | null = null;
  let gridOverlay: Scene["gridOverlay"] = null;
  let renders = 0;

  function render(): void {
    if (model && ctx) {
      renderMap(ctx, {
        model,
        plan: state.plan,
        pose: state.pose,
        poseStale: state.poseStale,
        selectedRoom: state.selectedRoom,
        gridOverlay: el.overlay.checked ? gridOverlay : null,
      }, el.canvas.width, el.canvas.height);
      renders += 1;
    }
    el.connection.textContent = state.connection;
    el.connection.className = `pill ${state.connection}`;
    el.move.disabled = !canMoveRobot(state);
    el.totalWeight.textContent = state.plan
      ? `total weight: ${state.plan.path.total_weight}`
      : "";
    (root.querySelector("#weights-unsaved") as HTMLSpanElement).hidden = !weightsDirty(state);
    const hazardous = state.rooms.filter((r) => r.hazard);
    const hazardBanner = hazardous.length
      ? `<div class="banner hazard-active">Hazard active: ${hazardous.map((r) => r.name).join(", ")}</div>`
      : "";
    el.banners.innerHTML = hazardBanner + state.banners
      .map((b) => `<div class="banner ${b.kind}">${b.text}</div>`)
      .join("");
    el.log.textContent = state.log.map((line) => line.text).join("\n");
    renderRoomPanel();
  }

  function renderRoomPanel(): void {
    const room = state.rooms.find((r) => r.id === state.selectedRoom);
    el.hazardToggle.hidden = !room;
    if (!room) {
      el.roomAttrs.textContent = "Select a room to inspect it.";
      return;
    }
    const age = room.scan_age_days === null ? "never scanned" : `${room.scan_age_days} days ago`;
    el.roomAttrs.innerHTML = `
      <dl>
        <dt>id</dt><dd>${room.id}</dd>
        <dt>name</dt><dd>${room.name}</dd>
        <dt>center</dt><dd>[${room.center[0]}, ${room.center[1]}] m</dd>
        <dt>area</dt><dd>${room.area} m²</dd>
        <dt>last scan</dt><dd>${room.last_scan ?? "never"} (${age})</dd>
        <dt>hazard</dt><dd class="${room.hazard ? "hazard-yes" : ""}">${room.hazard ? "ACTIVE" : "none"}</dd>
      </dl>`;
  }

  function update(next: ViewState): void {
    state = next;
    render();
  }

  function renderWeightFields(): void {
    el.weightFields.innerHTML = Object.keys(state.weightDraft)
      .map((key) => `
        <label class="weight-row">${key}
          <input type="number" step="any" data-weight="${key}" value="${state.weightDraft[key]}">
        </label>`)
      .join("");
    for (const input of Array.from(el.weightFields.querySelectorAll("input[data-weight]"))) {
      input.addEventListener("change", (event) => {
        const target = event.target as HTMLInputElement;
        update(editWeight(state, target.dataset.weight as string, Number(target.value)));
      });
    }
  }

  async function refresh(): Promise<void> {
    model = await api.getModel();
    const rooms = await api.getRooms();
    update(setRooms(state, rooms));
    update(setServerWeights(state, await api.getWeights()));
    renderWeightFields();
    el.destination.innerHTML = '<option value="">select a room…</option>'
      + rooms.map((r) => `<option value="${r.id}">${r.name}</option>`).join("");
    if (state.selectedRoom) el.destination.value = state.selectedRoom;
  }

  async function saveWeightsIfDirty(): Promise<boolean> {
    el.weightError.hidden = true;
    if (!weightsDirty(state)) return true;
    try {
      const saved = await api.putWeights(state.weightDraft);
      update(setServerWeights(state, saved));
      return true;
    } catch (error) {
      el.weightError.textContent = error instanceof ApiError
        ? `weights rejected: ${error.message}`
        : String(error);
      el.weightError.hidden = false;
      return false;
    }
  }

  async function planAndPreview(): Promise<void> {
    if (!state.selectedRoom) {
      update(planFailed(state, "Pick a destination first"));
      return;
    }
    if (!(await saveWeightsIfDirty())) return; // inline error, no plan request
    try {
      update(applyPlan(state, await api.plan(state.selectedRoom)));
    } catch (error) {
      const message = error instanceof ApiError ? error.message : String(error);
      update(planFailed(state, message));
    }
  }

  async function moveRobot(): Promise<void> {
    if (!canMoveRobot(state)) return;
    if (!state.selectedRoom) return;
    try {
      await api.startMission(state.selectedRoom);
      update({ ...state, missionActive: true }); // confirmed by the next state record
    } catch (error) {
      const message = error instanceof ApiError ? error.message : String(error);
      update(planFailed(state, `mission rejected: ${message}`));
      await refresh(); // resync after a race, e.g. another commander won
    }
  }

  async function toggleHazard(roomId: string): Promise<void> {
    const room = state.rooms.find((r) => r.id === roomId);
    if (!room) return;
    await api.setHazard(roomId, !room.hazard);
    update(setRooms(state, await api.getRooms()));
  }

  async function loadGridOverlay(): Promise<void> {
    const grid = await api.getGrid(false);
    const bytes = typeof atob === "function"
      ? Uint8Array.from(atob(grid.pgm_base64), (c) => c.charCodeAt(0))
      : new Uint8Array(Buffer.from(grid.pgm_base64, "base64"));
    const header = `P5\n${grid.width} ${grid.height}\n255\n`;
    const pixels = bytes.slice(header.length);
    const cells: Point[] = [];
    for (let row = 0; row < grid.height; row += 1) {
      for (let col = 0; col < grid.width; col += 1) {
        if (pixels[row * grid.width + col] === 0) {
          cells.push([col, grid.height - 1 - row]); // PGM row 0 is the top
        }
      }
    }
    gridOverlay = { origin: grid.origin, resolution: grid.resolution, cells };
  }

  el.plan.addEventListener("click", () => void planAndPreview());
  el.move.addEventListener("click", () => void moveRobot());
  el.abort.addEventListener("click", () => void api.abortMission().catch(() => undefined));
  el.destination.addEventListener("change", () => {
    update(selectRoom(state, el.destination.value || null));
  });
  el.hazardToggle.addEventListener("click", () => {
    if (state.selectedRoom) void toggleHazard(state.selectedRoom);
  });
  el.saveWeights.addEventListener("click", () => void saveWeightsIfDirty());
  el.overlay.addEventListener("change", () => {
    if (el.overlay.checked && !gridOverlay) {
      void loadGridOverlay().then(render);
    } else {
      render();
    }
  });

  const telemetry: TelemetrySubscription = subscribeTelemetry(
    options.base ?? "",
    (record) => update(applyTelemetry(state, record)),
    () => update(connectionLost(state)),
    options.reconnectDelayMs ?? 1000,
  );

  await refresh();
  render();

  return {
    state: () => state,
    planAndPreview,
    moveRobot,
    selectDestination(roomId: string) {
      el.destination.value = roomId;
      update(selectRoom(state, roomId || null));
    },
    setWeightField(key: string, value: number) {
      update(editWeight(state, key, value));
    },
    toggleHazard,
    refresh,
    renderCount: () => renders,
    dispose() {
      telemetry.stop();
    },
  };
}

declare const Buffer: { from(data: string, encoding: string): Uint8Array };

if (typeof document !== "undefined" && document.getElementById("app")) {
  void createConsole(document.getElementById("app") as HTMLElement);
}
