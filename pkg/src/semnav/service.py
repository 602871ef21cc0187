"""HTTP service exposing the stack to operators and scripts.

Planning endpoints are stateless and read an immutable model snapshot; all
mission mutation funnels through a command queue drained by the single
runner thread between integration steps. Responses use the envelope
``{ok: true, data: ...}`` / ``{ok: false, error: {kind, message}}``.
"""

from __future__ import annotations

import base64
import json
import queue
import threading
import time
from datetime import date
from pathlib import Path
from typing import Any, Iterator

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, RedirectResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from . import sim as simmod
from .errors import (
    GeometryError,
    IntegrityError,
    NoPath,
    SchemaError,
    SemnavError,
    UnknownRoom,
)
from .grid import grid_metadata, grid_to_pgm, inflate, rasterize, stitch
from .hypergraph import WeightConfig, build_hypergraph, scan_age_days
from .model import BuildingModel, model_to_dict, set_hazard
from .planner import optimal_path, waypoints
from .sim import Event, MissionState, RobotState, SimParams

TELEMETRY_IDLE_PERIOD = 0.5  # s between state records when no mission runs


class ServiceState:
    """Mutable backend state: one model, one config, at most one mission."""

    def __init__(
        self,
        model: BuildingModel,
        config: WeightConfig | None = None,
        params: SimParams | None = None,
        start_room: str | None = None,
        rate: float = 1.0,
        today: date | None = None,
    ):
        self.lock = threading.RLock()
        self.model = model
        self.config = config or WeightConfig()
        self.params = params or SimParams()
        self.rate = rate
        self.today = today
        self.raw_grid = rasterize(model, self.params.resolution)
        self.nav_grid = inflate(self.raw_grid, self.params.inflate_radius)
        self.plan_grid = inflate(self.raw_grid, self.params.inflate_radius + self.params.plan_margin)
        start = start_room or sorted(r.id for r in model.rooms)[0]
        cx, cy = model.room(start).center
        self.robot = RobotState(x=cx, y=cy, theta=0.0, status="idle")
        self.mission: MissionState | None = None
        self.runner: threading.Thread | None = None
        self.commands: "queue.Queue[tuple]" = queue.Queue()
        self.subscribers: list["queue.Queue[dict]"] = []
        self.event_history: list[Event] = []

    # -- telemetry ---------------------------------------------------------

    def subscribe(self) -> "queue.Queue[dict]":
        q: "queue.Queue[dict]" = queue.Queue()
        with self.lock:
            self.subscribers.append(q)
        return q

    def unsubscribe(self, q: "queue.Queue[dict]") -> None:
        with self.lock:
            if q in self.subscribers:
                self.subscribers.remove(q)

    def publish(self, record: dict) -> None:
        with self.lock:
            subs = list(self.subscribers)
        for q in subs:
            q.put(record)

    def publish_events(self, events: list[Event]) -> None:
        for e in events:
            with self.lock:
                self.event_history.append(e)
            self.publish({"t": e.t, "kind": e.kind, "payload": e.payload})

    def state_record(self) -> dict:
        mission = self.mission
        robot = mission.robot if mission else self.robot
        return {
            "t": mission.clock if mission else 0.0,
            "kind": "state",
            "payload": {
                **robot.to_dict(),
                "current_room": mission.current_room if mission else self.current_room(),
                "mission_active": bool(mission and not mission.done and robot.status != "idle"),
            },
        }

    def current_room(self) -> str:
        return simmod.current_room_of(self.model, (self.robot.x, self.robot.y))

    # -- mission loop ------------------------------------------------------

    def mission_active(self) -> bool:
        m = self.mission
        return bool(m and m.robot.status in ("executing", "replanning"))

    def start_mission(self, to_room: str) -> MissionState:
        with self.lock:
            if self.mission_active():
                raise RuntimeError("a mission is already executing")
            mission = simmod.start_mission(
                self.model,
                self.config,
                to_room,
                start_pose=(self.robot.x, self.robot.y, self.robot.theta),
                params=self.params,
                today=self.today,
            )
            self.mission = mission
            self.publish_events(list(mission.events))
            self.runner = threading.Thread(target=self._run, args=(mission,), daemon=True)
            self.runner.start()
            return mission

    def _run(self, mission: MissionState) -> None:
        seen = len(mission.events)
        dt = self.params.dt
        deadline = mission.clock + 3.0 * mission.grid_path.length / self.params.v_max + 5.0
        while True:
            loop_start = time.monotonic()
            with self.lock:
                while True:
                    try:
                        cmd = self.commands.get_nowait()
                    except queue.Empty:
                        break
                    if cmd[0] == "hazard":
                        was_path = mission.grid_path
                        mission.config = self.config  # weight edits land on replan
                        simmod.inject_hazard(mission, cmd[1], cmd[2])
                        if mission.grid_path is not was_path:
                            deadline = mission.clock + 3.0 * mission.grid_path.length / self.params.v_max + 5.0
                    elif cmd[0] == "abort":
                        simmod.abort(mission)
                simmod.step(mission, dt)
                if mission.robot.status == "executing" and mission.clock > deadline:
                    simmod.abort(mission, reason="time budget exceeded")
                fresh = mission.events[seen:]
                seen = len(mission.events)
                self.robot = mission.robot
            self.publish_events(fresh)
            self.publish(self.state_record())
            if mission.done or mission.robot.status == "idle":
                return
            elapsed = time.monotonic() - loop_start
            time.sleep(max(0.0, dt / self.rate - elapsed))


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

def _ok(data: Any) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data})


def _err(exc: Exception, status: int) -> JSONResponse:
    return JSONResponse(
        {"ok": False, "error": {"kind": type(exc).__name__, "message": str(exc)}},
        status_code=status,
    )


_STATUS = {
    SchemaError: 400,
    GeometryError: 400,
    IntegrityError: 400,
    ValueError: 400,
    UnknownRoom: 404,
    NoPath: 422,
    RuntimeError: 409,
}


def _status_for(exc: Exception) -> int:
    for etype, code in _STATUS.items():
        if isinstance(exc, etype):
            return code
    return 500


def create_app(
    model: BuildingModel,
    config: WeightConfig | None = None,
    params: SimParams | None = None,
    start_room: str | None = None,
    rate: float = 1.0,
    today: date | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    state = ServiceState(model, config=config, params=params, start_room=start_room, rate=rate, today=today)
    app = FastAPI(title="semnav")
    app.state.semnav = state
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(SemnavError)
    async def _semnav_error(_req: Request, exc: SemnavError):
        return _err(exc, _status_for(exc))

    @app.exception_handler(ValueError)
    async def _value_error(_req: Request, exc: ValueError):
        return _err(exc, 400)

    @app.exception_handler(RuntimeError)
    async def _conflict(_req: Request, exc: RuntimeError):
        return _err(exc, 409)

    @app.get("/api/model")
    def get_model():
        with state.lock:
            return _ok(model_to_dict(state.model))

    @app.get("/api/rooms")
    def get_rooms():
        today_ = state.today or date.today()
        with state.lock:
            rooms = [
                {
                    "id": r.id,
                    "name": r.name,
                    "center": list(r.center),
                    "area": r.area,
                    "last_scan": r.last_scan.isoformat() if r.last_scan else None,
                    "scan_age_days": scan_age_days(r, today_),
                    "hazard": r.hazard,
                }
                for r in sorted(state.model.rooms, key=lambda r: r.id)
            ]
        return _ok(rooms)

    @app.get("/api/grid")
    def get_grid(inflated: bool = False):
        grid = state.nav_grid if inflated else state.raw_grid
        meta = grid_metadata(grid)
        meta["inflated"] = inflated
        meta["pgm_base64"] = base64.b64encode(grid_to_pgm(grid)).decode("ascii")
        return _ok(meta)

    @app.get("/api/weights")
    def get_weights():
        with state.lock:
            return _ok(state.config.to_dict())

    @app.put("/api/weights")
    def put_weights(body: dict):
        new_config = WeightConfig.from_dict(body)  # SchemaError -> 400, config untouched
        with state.lock:
            state.config = new_config
            return _ok(state.config.to_dict())

    @app.post("/api/plan")
    def post_plan(body: dict):
        to_room = body.get("to")
        if not isinstance(to_room, str):
            raise SchemaError("plan request needs a 'to' room id")
        override = body.get("weights")
        with state.lock:
            model_snapshot = state.model
            config_ = WeightConfig.from_dict(override) if override is not None else state.config
            from_room = body.get("from") or (
                state.mission.current_room if state.mission_active() else state.current_room()
            )
        if not isinstance(from_room, str):
            raise SchemaError("plan request needs a 'from' room id")
        graph = build_hypergraph(model_snapshot, config_, state.today or date.today())
        path = optimal_path(graph, from_room, to_room, config_)
        grid_path = stitch(state.plan_grid, waypoints(path))
        return _ok({
            "path": path.to_dict(),
            "waypoints": [list(p) for p in waypoints(path)],
            "grid_path": [list(p) for p in grid_path.points],
        })

    @app.post("/api/hazard")
    def post_hazard(body: dict):
        room_id = body.get("room_id")
        if not isinstance(room_id, str):
            raise SchemaError("hazard request needs a 'room_id'")
        active = body.get("active")
        if not isinstance(active, bool):
            raise SchemaError("hazard request needs a boolean 'active'")
        with state.lock:
            state.model = set_hazard(state.model, room_id, active)  # UnknownRoom -> 404
            if state.mission_active():
                state.commands.put(("hazard", room_id, active))
            return _ok({"room_id": room_id, "active": active})

    @app.post("/api/mission/start")
    def mission_start(body: dict):
        to_room = body.get("to")
        if not isinstance(to_room, str):
            raise SchemaError("mission request needs a 'to' room id")
        mission = state.start_mission(to_room)  # RuntimeError -> 409 when one is active
        return _ok({
            "to": to_room,
            "from": mission.semantic.room_ids[0],
            "rooms": list(mission.semantic.room_ids),
            "total_weight": mission.semantic.total_weight,
            "status": mission.robot.status,
        })

    @app.post("/api/mission/abort")
    def mission_abort():
        with state.lock:
            if not state.mission_active():
                return _ok({"status": "idle"})
            state.commands.put(("abort",))
        return _ok({"status": "aborting"})

    @app.get("/api/telemetry")
    def telemetry(limit: int | None = None):
        sub = state.subscribe()

        def stream() -> Iterator[bytes]:
            sent = 0
            try:
                yield _record_line(state.state_record())
                sent += 1
                while limit is None or sent < limit:
                    try:
                        record = sub.get(timeout=TELEMETRY_IDLE_PERIOD)
                    except queue.Empty:
                        record = state.state_record()
                    yield _record_line(record)
                    sent += 1
            finally:
                state.unsubscribe(sub)

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse("/ui/")

    return app


def _record_line(record: dict) -> bytes:
    return (json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")
