"""Mission execution on a simulated differential-drive robot.

The robot follows the stitched grid path under a pure-pursuit style tracker
with unicycle kinematics, fixed-step integration, and ground-truth
localization. Hazard injection triggers semantic replanning from the current
room; imminent collisions trigger an emergency stop. Everything is
deterministic for a given model, config, dt sequence, and hazard schedule.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from datetime import date
from typing import Any, Sequence

from . import grid as gridmod
from .errors import NoPath, UnknownRoom
from .hypergraph import Hypergraph, WeightConfig, build_hypergraph
from .model import BuildingModel, Point, set_hazard
from .planner import SemanticPath, optimal_path, waypoints

EVENT_KINDS = (
    "mission-started", "waypoint-reached", "room-entered", "hazard-injected",
    "replanned", "warning", "estop", "goal-reached", "aborted",
)


@dataclass(frozen=True)
class SimParams:
    v_max: float = 1.0          # m/s
    omega_max: float = 1.5      # rad/s
    lookahead: float = 0.5      # m
    goal_radius: float = 0.3    # m
    turn_in_place_rad: float = 1.0  # heading error above which the robot stops and rotates
    dt: float = 0.05            # s
    resolution: float = gridmod.DEFAULT_RESOLUTION
    inflate_radius: float = gridmod.DEFAULT_INFLATE_RADIUS
    plan_margin: float = 0.2    # extra inflation for planning; absorbs tracking error
    pose_noise_std: float = 0.0  # Gaussian noise on the pose fed to the tracker; 0 = off
    noise_seed: int = 0


@dataclass
class RobotState:
    x: float
    y: float
    theta: float
    v: float = 0.0
    omega: float = 0.0
    status: str = "idle"  # idle | executing | estopped | finished | replanning

    @property
    def pose(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)

    def to_dict(self) -> dict:
        return {
            "x": self.x, "y": self.y, "theta": self.theta,
            "v": self.v, "omega": self.omega, "status": self.status,
        }


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "kind": self.kind, "payload": self.payload},
                          sort_keys=True, separators=(",", ":"))


@dataclass
class MissionState:
    model: BuildingModel
    config: WeightConfig
    params: SimParams
    built_at: date
    graph: Hypergraph
    nav_grid: gridmod.OccupancyGrid   # safety inflation; the estop boundary
    plan_grid: gridmod.OccupancyGrid  # safety + margin; what A* plans on
    raw_grid: gridmod.OccupancyGrid
    robot: RobotState
    goal_room: str
    semantic: SemanticPath
    grid_path: gridmod.GridPath
    current_room: str
    clock: float = 0.0
    events: list[Event] = field(default_factory=list)
    next_waypoint: int = 0
    _noise: Any = None

    def log(self, kind: str, payload: dict) -> None:
        self.events.append(Event(t=self.clock, kind=kind, payload=payload))

    @property
    def goal_center(self) -> Point:
        return self.model.room(self.goal_room).center

    @property
    def done(self) -> bool:
        return self.robot.status in ("finished", "estopped") or (
            self.robot.status == "idle" and bool(self.events) and self.events[-1].kind == "aborted"
        )


# ---------------------------------------------------------------------------
# Room anchoring
# ---------------------------------------------------------------------------

def _room_bboxes(model: BuildingModel) -> dict[str, tuple[float, float, float, float]]:
    boxes: dict[str, tuple[float, float, float, float]] = {}
    for room in model.rooms:
        xs: list[float] = [room.center[0]]
        ys: list[float] = [room.center[1]]
        for wall in model.walls_of(room):
            for a, b in wall.segments:
                xs.extend((a[0], b[0]))
                ys.extend((a[1], b[1]))
        boxes[room.id] = (min(xs), min(ys), max(xs), max(ys))
    return boxes


def current_room_of(model: BuildingModel, p: Point,
                    boxes: dict[str, tuple[float, float, float, float]] | None = None) -> str:
    """Room whose wall-derived bounding box contains the pose, nearest center
    breaking ties; falls back to the overall nearest center between rooms."""
    boxes = boxes if boxes is not None else _room_bboxes(model)
    containing = [
        r for r in model.rooms
        if boxes[r.id][0] <= p[0] <= boxes[r.id][2] and boxes[r.id][1] <= p[1] <= boxes[r.id][3]
    ]
    candidates = containing or list(model.rooms)
    return min(candidates, key=lambda r: (math.hypot(r.center[0] - p[0], r.center[1] - p[1]), r.id)).id


# ---------------------------------------------------------------------------
# Tracker
# ---------------------------------------------------------------------------

def _wrap_angle(a: float) -> float:
    while a > math.pi:
        a -= 2.0 * math.pi
    while a < -math.pi:
        a += 2.0 * math.pi
    return a


def follow(path: gridmod.GridPath, state: RobotState, lookahead: float,
           params: SimParams = SimParams(), stop_radius: float | None = None) -> tuple[float, float]:
    """Pure-pursuit command toward the point `lookahead` ahead of the closest
    path point. Rotates in place for large heading errors; otherwise drives
    the arc through the target, slowing with heading error. Returns (0, 0)
    once within the stop radius (defaults to the goal radius) of the final
    point."""
    if not path.points:
        return 0.0, 0.0
    stop = params.goal_radius if stop_radius is None else stop_radius
    px, py = state.x, state.y
    end = path.points[-1]
    if math.hypot(end[0] - px, end[1] - py) <= stop:
        return 0.0, 0.0

    nearest = min(range(len(path.points)),
                  key=lambda i: (path.points[i][0] - px) ** 2 + (path.points[i][1] - py) ** 2)
    target = path.points[-1]
    travelled = 0.0
    for i in range(nearest + 1, len(path.points)):
        ax, ay = path.points[i - 1]
        bx, by = path.points[i]
        travelled += math.hypot(bx - ax, by - ay)
        if travelled >= lookahead:
            target = path.points[i]
            break

    alpha = _wrap_angle(math.atan2(target[1] - py, target[0] - px) - state.theta)
    if abs(alpha) >= params.turn_in_place_rad:
        return 0.0, math.copysign(params.omega_max, alpha)
    dist = max(math.hypot(target[0] - px, target[1] - py), 1e-6)
    curvature = 2.0 * math.sin(alpha) / dist
    v = params.v_max * (1.0 - abs(alpha) / params.turn_in_place_rad)
    if curvature != 0.0 and v * abs(curvature) > params.omega_max:
        v = params.omega_max / abs(curvature)
    return v, v * curvature


# ---------------------------------------------------------------------------
# Mission construction and stepping
# ---------------------------------------------------------------------------

def start_mission(
    model: BuildingModel,
    config: WeightConfig,
    goal_room: str,
    start_room: str | None = None,
    start_pose: tuple[float, float, float] | None = None,
    params: SimParams = SimParams(),
    today: date | None = None,
) -> MissionState:
    """Plan and stitch a mission; the robot starts at the start room center
    unless an explicit pose is given."""
    today = today or date.today()
    graph = build_hypergraph(model, config, today)
    raw = gridmod.rasterize(model, params.resolution)
    nav = gridmod.inflate(raw, params.inflate_radius)
    plan = gridmod.inflate(raw, params.inflate_radius + params.plan_margin)

    if start_pose is None:
        start_room = start_room or sorted(r.id for r in model.rooms)[0]
        cx, cy = model.room(start_room).center
        start_pose = (cx, cy, 0.0)
    robot = RobotState(x=start_pose[0], y=start_pose[1], theta=start_pose[2], status="executing")
    if start_room is None:
        start_room = current_room_of(model, (robot.x, robot.y))

    semantic = optimal_path(graph, start_room, goal_room, config)
    grid_path = gridmod.stitch(plan, [(robot.x, robot.y), *waypoints(semantic)])

    mission = MissionState(
        model=model, config=config, params=params, built_at=today,
        graph=graph, nav_grid=nav, plan_grid=plan, raw_grid=raw, robot=robot,
        goal_room=goal_room, semantic=semantic, grid_path=grid_path,
        current_room=start_room,
    )
    if params.pose_noise_std > 0:
        mission._noise = random.Random(params.noise_seed)
    mission.log("mission-started", {
        "from": start_room, "to": goal_room,
        "rooms": list(semantic.room_ids), "total_weight": semantic.total_weight,
    })
    for w in semantic.warnings:
        mission.log("warning", {"kind": w.kind, "room_ids": list(w.room_ids)})
    return mission


def _next_pose(state: RobotState, dt: float) -> tuple[float, float, float]:
    return (
        state.x + state.v * math.cos(state.theta) * dt,
        state.y + state.v * math.sin(state.theta) * dt,
        state.theta + state.omega * dt,
    )


def estop_check(mission: MissionState, dt: float | None = None) -> MissionState:
    """Stop before the next integrated position would enter an occupied cell."""
    dt = dt if dt is not None else mission.params.dt
    if mission.robot.status != "executing":
        return mission
    nx, ny, _ = _next_pose(mission.robot, dt)
    if not mission.nav_grid.point_free((nx, ny)):
        mission.robot.v = 0.0
        mission.robot.omega = 0.0
        mission.robot.status = "estopped"
        mission.log("estop", {"x": mission.robot.x, "y": mission.robot.y})
    return mission


def step(mission: MissionState, dt: float) -> MissionState:
    """Advance the mission by one fixed integration step."""
    if not 0.0 < dt <= 0.1:
        raise ValueError(f"dt must be in (0, 0.1], got {dt}")
    robot = mission.robot
    if robot.status != "executing":
        mission.clock += dt
        return mission

    observed = (robot.x, robot.y)
    if mission._noise is not None:
        observed = (
            robot.x + mission._noise.gauss(0.0, mission.params.pose_noise_std),
            robot.y + mission._noise.gauss(0.0, mission.params.pose_noise_std),
        )
    tracker_state = RobotState(x=observed[0], y=observed[1], theta=robot.theta)
    # Stop radius below the goal radius: the mission-level goal check (true
    # room center) must fire before the tracker parks at the snapped path end.
    robot.v, robot.omega = follow(
        mission.grid_path, tracker_state, mission.params.lookahead, mission.params,
        stop_radius=mission.params.goal_radius / 2.0,
    )

    estop_check(mission, dt)
    mission.clock += dt
    if robot.status != "executing":
        return mission

    robot.x, robot.y, robot.theta = _next_pose(robot, dt)
    robot.theta = _wrap_angle(robot.theta)

    wp = waypoints(mission.semantic)
    while mission.next_waypoint < len(wp):
        tx, ty = wp[mission.next_waypoint]
        if math.hypot(tx - robot.x, ty - robot.y) > mission.params.goal_radius:
            break
        mission.log("waypoint-reached", {"index": mission.next_waypoint, "point": [tx, ty]})
        mission.next_waypoint += 1

    room = current_room_of(mission.model, (robot.x, robot.y))
    if room != mission.current_room:
        mission.current_room = room
        mission.log("room-entered", {"room_id": room})

    gx, gy = mission.goal_center
    if math.hypot(gx - robot.x, gy - robot.y) <= mission.params.goal_radius:
        robot.v = 0.0
        robot.omega = 0.0
        robot.status = "finished"
        mission.log("goal-reached", {"room_id": mission.goal_room, "x": robot.x, "y": robot.y})
    return mission


# ---------------------------------------------------------------------------
# Hazards and replanning
# ---------------------------------------------------------------------------

def inject_hazard(mission: MissionState, room_id: str, active: bool) -> MissionState:
    """Update the model snapshot; replan when an activated hazard sits on the
    active path.  Clearing a hazard never interrupts the mission."""
    mission.model = set_hazard(mission.model, room_id, active)  # raises UnknownRoom
    mission.log("hazard-injected", {"room_id": room_id, "active": active})
    if active and room_id in mission.semantic.room_ids and mission.robot.status == "executing":
        mission.robot.status = "replanning"
        replan(mission)
    return mission


def replan(mission: MissionState) -> MissionState:
    """Rebuild the hypergraph, re-run the planner from the current room, and
    restitch the metric path from the current pose. The robot keeps driving
    the stale path until the swap, which happens here, between steps."""
    mission.graph = build_hypergraph(mission.model, mission.config, mission.built_at)
    start = mission.current_room
    try:
        if start == mission.goal_room:
            raise NoPath(f"already in goal room {start!r}")  # replan is only called with a live path
        semantic = optimal_path(mission.graph, start, mission.goal_room, mission.config)
        grid_path = gridmod.stitch(
            mission.plan_grid, [(mission.robot.x, mission.robot.y), *waypoints(semantic)]
        )
    except NoPath as exc:
        mission.robot.v = 0.0
        mission.robot.omega = 0.0
        mission.robot.status = "idle"
        mission.log("aborted", {"reason": str(exc)})
        return mission
    mission.semantic = semantic
    mission.grid_path = grid_path
    mission.next_waypoint = 0
    mission.robot.status = "executing"
    mission.log("replanned", {
        "from": start, "rooms": list(semantic.room_ids), "total_weight": semantic.total_weight,
    })
    for w in semantic.warnings:
        mission.log("warning", {"kind": w.kind, "room_ids": list(w.room_ids)})
    return mission


def abort(mission: MissionState, reason: str = "operator abort") -> MissionState:
    if mission.robot.status in ("executing", "replanning", "estopped"):
        mission.robot.v = 0.0
        mission.robot.omega = 0.0
        mission.robot.status = "idle"
        mission.log("aborted", {"reason": reason})
    return mission


# ---------------------------------------------------------------------------
# Headless mission scripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MissionScript:
    to: str
    from_room: str | None = None
    hazards: tuple[tuple[float, str, bool], ...] = ()  # (time, room_id, active)
    today: date | None = None
    dt: float = 0.05

    @classmethod
    def from_json(cls, text: str | bytes) -> "MissionScript":
        from .errors import SchemaError

        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
        if not isinstance(doc, dict) or "to" not in doc:
            raise SchemaError("mission script needs a 'to' room id")
        known = {"to", "from", "hazards", "today", "dt"}
        unknown = set(doc) - known
        if unknown:
            raise SchemaError(f"unknown script key(s) {sorted(unknown)}")
        hazards = []
        for h in doc.get("hazards", []):
            hazards.append((float(h["t"]), str(h["room_id"]), bool(h.get("active", True))))
        hazards.sort(key=lambda h: h[0])
        return cls(
            to=doc["to"],
            from_room=doc.get("from"),
            hazards=tuple(hazards),
            today=date.fromisoformat(doc["today"]) if doc.get("today") else None,
            dt=float(doc.get("dt", 0.05)),
        )


def run_script(
    model: BuildingModel,
    script: MissionScript,
    config: WeightConfig | None = None,
    params: SimParams = SimParams(),
) -> MissionState:
    """Run a mission to completion/abort, injecting scheduled hazards."""
    config = config or WeightConfig()
    mission = start_mission(
        model, config, script.to, start_room=script.from_room,
        params=params, today=script.today,
    )
    pending = list(script.hazards)
    deadline = _deadline(mission)
    while not mission.done:
        while pending and mission.clock >= pending[0][0]:
            _, room_id, active = pending.pop(0)
            was_path = mission.grid_path
            inject_hazard(mission, room_id, active)
            if mission.grid_path is not was_path:
                deadline = _deadline(mission)
        step(mission, script.dt)
        if mission.robot.status == "executing" and mission.clock > deadline:
            abort(mission, reason="time budget exceeded")
    return mission


def _deadline(mission: MissionState) -> float:
    # liveness budget: 3x the time the path would take at full speed
    return mission.clock + 3.0 * mission.grid_path.length / mission.params.v_max + 5.0


def events_to_ndjson(events: Sequence[Event]) -> str:
    return "".join(e.to_json() + "\n" for e in events)
