"""Building exchange format: parse, validate, and query room/wall/door semantics.

The exchange file is UTF-8 JSON with top-level keys ``birs_schema`` (must be 1),
``bounds``, ``rooms``, ``walls``, ``doors``. Points are ``[x, y]`` in meters,
dates ISO-8601 ``YYYY-MM-DD``. Parsed models are immutable; derive edited
copies with :func:`set_hazard`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import date
from typing import Any, Iterable

from .errors import GeometryError, IntegrityError, SchemaError, UnknownRoom

Point = tuple[float, float]
Segment = tuple[Point, Point]

MATERIAL_CLASSES = ("standard", "curtain")
OPENINGS = ("push", "pull")
DEFAULT_WALL_THICKNESS = 0.2
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Bounds:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def contains(self, p: Point) -> bool:
        return self.x_min <= p[0] <= self.x_max and self.y_min <= p[1] <= self.y_max


@dataclass(frozen=True)
class Room:
    id: str
    name: str
    center: Point
    area: float
    wall_ids: tuple[str, ...]
    last_scan: date | None  # None = never scanned
    hazard: bool


@dataclass(frozen=True)
class Wall:
    id: str
    material_class: str  # "standard" | "curtain"
    segments: tuple[Segment, ...]
    thickness: float


@dataclass(frozen=True)
class Door:
    id: str
    center: Point
    from_room: str
    to_room: str
    opening: str  # traversal from_room -> to_room is "push" | "pull"


@dataclass(frozen=True)
class BuildingModel:
    rooms: tuple[Room, ...]
    walls: tuple[Wall, ...]
    doors: tuple[Door, ...]
    bounds: Bounds

    def room(self, room_id: str) -> Room:
        for r in self.rooms:
            if r.id == room_id:
                return r
        raise UnknownRoom(f"no room with id {room_id!r}")

    def wall(self, wall_id: str) -> Wall:
        for w in self.walls:
            if w.id == wall_id:
                return w
        raise IntegrityError(f"no wall with id {wall_id!r}")

    def walls_of(self, room: Room) -> list[Wall]:
        return [self.wall(wid) for wid in room.wall_ids]


@dataclass(frozen=True)
class Violation:
    rule: str
    subject_id: str
    message: str


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _require(obj: dict, key: str, locus: str) -> Any:
    if key not in obj:
        raise SchemaError(f"missing required field {key!r}", locus)
    return obj[key]


def _check_keys(obj: dict, allowed: Iterable[str], locus: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)}", locus)


def _as_point(value: Any, locus: str) -> Point:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
    ):
        raise SchemaError("expected a point [x, y] of numbers", locus)
    return (float(value[0]), float(value[1]))


def _as_str(value: Any, locus: str) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError("expected a non-empty string", locus)
    return value


def _as_number(value: Any, locus: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SchemaError("expected a number", locus)
    return float(value)


def _as_bool(value: Any, locus: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError("expected a boolean", locus)
    return value


def _as_date(value: Any, locus: str) -> date:
    if not isinstance(value, str):
        raise SchemaError("expected an ISO-8601 date string", locus)
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise SchemaError(f"bad date: {exc}", locus) from None


def _parse_room(obj: Any, idx: int) -> Room:
    locus = f"rooms[{idx}]"
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", locus)
    _check_keys(obj, ("id", "name", "center", "area", "wall_ids", "last_scan", "hazard"), locus)
    rid = _as_str(_require(obj, "id", locus), f"{locus}.id")
    wall_ids = obj.get("wall_ids", [])
    if not isinstance(wall_ids, list) or not all(isinstance(w, str) for w in wall_ids):
        raise SchemaError("expected a list of wall id strings", f"{locus}.wall_ids")
    last_scan = obj.get("last_scan")
    return Room(
        id=rid,
        name=_as_str(_require(obj, "name", locus), f"{locus}.name"),
        center=_as_point(_require(obj, "center", locus), f"{locus}.center"),
        area=_as_number(_require(obj, "area", locus), f"{locus}.area"),
        wall_ids=tuple(wall_ids),
        last_scan=None if last_scan is None else _as_date(last_scan, f"{locus}.last_scan"),
        hazard=_as_bool(obj.get("hazard", False), f"{locus}.hazard"),
    )


def _parse_wall(obj: Any, idx: int) -> Wall:
    locus = f"walls[{idx}]"
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", locus)
    _check_keys(obj, ("id", "material_class", "segments", "thickness"), locus)
    wid = _as_str(_require(obj, "id", locus), f"{locus}.id")
    material = _as_str(_require(obj, "material_class", locus), f"{locus}.material_class")
    if material not in MATERIAL_CLASSES:
        raise SchemaError(
            f"unknown material_class {material!r}, expected one of {MATERIAL_CLASSES}",
            f"{locus}.material_class",
        )
    raw_segments = _require(obj, "segments", locus)
    if not isinstance(raw_segments, list):
        raise SchemaError("expected a list of segments", f"{locus}.segments")
    segments = []
    for j, seg in enumerate(raw_segments):
        seg_locus = f"{locus}.segments[{j}]"
        if not isinstance(seg, (list, tuple)) or len(seg) != 2:
            raise SchemaError("expected a segment [[x1,y1],[x2,y2]]", seg_locus)
        segments.append((_as_point(seg[0], seg_locus), _as_point(seg[1], seg_locus)))
    thickness = obj.get("thickness")
    return Wall(
        id=wid,
        material_class=material,
        segments=tuple(segments),
        thickness=DEFAULT_WALL_THICKNESS if thickness is None else _as_number(thickness, f"{locus}.thickness"),
    )


def _parse_door(obj: Any, idx: int) -> Door:
    locus = f"doors[{idx}]"
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", locus)
    _check_keys(obj, ("id", "center", "from_room", "to_room", "opening"), locus)
    opening = _as_str(_require(obj, "opening", locus), f"{locus}.opening")
    if opening not in OPENINGS:
        raise SchemaError(f"unknown opening {opening!r}, expected one of {OPENINGS}", f"{locus}.opening")
    return Door(
        id=_as_str(_require(obj, "id", locus), f"{locus}.id"),
        center=_as_point(_require(obj, "center", locus), f"{locus}.center"),
        from_room=_as_str(_require(obj, "from_room", locus), f"{locus}.from_room"),
        to_room=_as_str(_require(obj, "to_room", locus), f"{locus}.to_room"),
        opening=opening,
    )


def parse_model(data: bytes | str) -> BuildingModel:
    """Parse and fully validate an exchange document.

    Raises SchemaError for malformed documents, IntegrityError for dangling or
    duplicate ids and self-loop doors, GeometryError for degenerate geometry.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    _check_keys(doc, ("birs_schema", "bounds", "rooms", "walls", "doors"), "top level")
    version = _require(doc, "birs_schema", "top level")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported birs_schema {version!r}, expected {SCHEMA_VERSION}", "birs_schema")

    raw_bounds = _require(doc, "bounds", "top level")
    if not isinstance(raw_bounds, (list, tuple)) or len(raw_bounds) != 2:
        raise SchemaError("expected [[x_min,y_min],[x_max,y_max]]", "bounds")
    lo = _as_point(raw_bounds[0], "bounds[0]")
    hi = _as_point(raw_bounds[1], "bounds[1]")
    if not (lo[0] < hi[0] and lo[1] < hi[1]):
        raise SchemaError("bounds min must be strictly below max on both axes", "bounds")
    bounds = Bounds(lo[0], lo[1], hi[0], hi[1])

    for key in ("rooms", "walls", "doors"):
        if not isinstance(doc.get(key), list):
            raise SchemaError("expected a list", key)

    model = BuildingModel(
        rooms=tuple(_parse_room(r, i) for i, r in enumerate(doc["rooms"])),
        walls=tuple(_parse_wall(w, i) for i, w in enumerate(doc["walls"])),
        doors=tuple(_parse_door(d, i) for i, d in enumerate(doc["doors"])),
        bounds=bounds,
    )
    _raise_violations(validate_model(model))
    return model


def _raise_violations(violations: list[Violation]) -> None:
    if not violations:
        return
    geometry_rules = {"positive-area", "nonzero-segment", "in-bounds", "positive-thickness"}
    first = violations[0]
    summary = "; ".join(f"{v.rule}: {v.message}" for v in violations)
    if first.rule in geometry_rules:
        raise GeometryError(summary)
    raise IntegrityError(summary)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_model(model: BuildingModel) -> list[Violation]:
    """Check every model invariant. Total: returns a list, never raises."""
    violations: list[Violation] = []

    def dup_check(items: Iterable[str], kind: str) -> set[str]:
        seen: set[str] = set()
        for item_id in items:
            if item_id in seen:
                violations.append(Violation("unique-id", item_id, f"duplicate {kind} id {item_id!r}"))
            seen.add(item_id)
        return seen

    room_ids = dup_check((r.id for r in model.rooms), "room")
    wall_ids = dup_check((w.id for w in model.walls), "wall")
    dup_check((d.id for d in model.doors), "door")

    for room in model.rooms:
        if room.area <= 0:
            violations.append(Violation("positive-area", room.id, f"area {room.area} must be > 0"))
        if not model.bounds.contains(room.center):
            violations.append(Violation("in-bounds", room.id, "room center outside bounds"))
        for wid in room.wall_ids:
            if wid not in wall_ids:
                violations.append(Violation("unknown-wall", room.id, f"references missing wall {wid!r}"))

    for wall in model.walls:
        if not wall.segments:
            violations.append(Violation("nonzero-segment", wall.id, "wall has no segments"))
        if wall.thickness <= 0:
            violations.append(Violation("positive-thickness", wall.id, f"thickness {wall.thickness} must be > 0"))
        for a, b in wall.segments:
            if a == b:
                violations.append(Violation("nonzero-segment", wall.id, f"zero-length segment at {a}"))
            if not (model.bounds.contains(a) and model.bounds.contains(b)):
                violations.append(Violation("in-bounds", wall.id, "segment endpoint outside bounds"))

    for door in model.doors:
        if door.from_room == door.to_room:
            violations.append(Violation("no-self-loop", door.id, f"door connects {door.from_room!r} to itself"))
        for ref in (door.from_room, door.to_room):
            if ref not in room_ids:
                violations.append(Violation("unknown-room", door.id, f"references missing room {ref!r}"))
        if not model.bounds.contains(door.center):
            violations.append(Violation("in-bounds", door.id, "door center outside bounds"))

    return violations


# ---------------------------------------------------------------------------
# Queries and derived copies
# ---------------------------------------------------------------------------

def room_adjacency(model: BuildingModel) -> dict[str, list[tuple[str, str]]]:
    """Map room id -> [(door id, neighbor room id)], sorted by door id."""
    adj: dict[str, list[tuple[str, str]]] = {r.id: [] for r in model.rooms}
    for door in model.doors:
        adj[door.from_room].append((door.id, door.to_room))
        adj[door.to_room].append((door.id, door.from_room))
    for entries in adj.values():
        entries.sort()
    return adj


def set_hazard(model: BuildingModel, room_id: str, active: bool) -> BuildingModel:
    """Return a copy of the model with one room's hazard flag changed."""
    model.room(room_id)  # raises UnknownRoom
    rooms = tuple(replace(r, hazard=active) if r.id == room_id else r for r in model.rooms)
    return replace(model, rooms=rooms)


def set_material(model: BuildingModel, wall_id: str, material_class: str) -> BuildingModel:
    """Return a copy of the model with one wall's material class changed."""
    if material_class not in MATERIAL_CLASSES:
        raise SchemaError(f"unknown material_class {material_class!r}")
    model.wall(wall_id)
    walls = tuple(replace(w, material_class=material_class) if w.id == wall_id else w for w in model.walls)
    return replace(model, walls=walls)


# ---------------------------------------------------------------------------
# Serialization (canonical form: entities sorted by id)
# ---------------------------------------------------------------------------

def model_to_dict(model: BuildingModel) -> dict:
    return {
        "birs_schema": SCHEMA_VERSION,
        "bounds": [
            [model.bounds.x_min, model.bounds.y_min],
            [model.bounds.x_max, model.bounds.y_max],
        ],
        "rooms": [
            {
                "id": r.id,
                "name": r.name,
                "center": list(r.center),
                "area": r.area,
                "wall_ids": list(r.wall_ids),
                "last_scan": r.last_scan.isoformat() if r.last_scan else None,
                "hazard": r.hazard,
            }
            for r in sorted(model.rooms, key=lambda r: r.id)
        ],
        "walls": [
            {
                "id": w.id,
                "material_class": w.material_class,
                "segments": [[list(a), list(b)] for a, b in w.segments],
                "thickness": w.thickness,
            }
            for w in sorted(model.walls, key=lambda w: w.id)
        ],
        "doors": [
            {
                "id": d.id,
                "center": list(d.center),
                "from_room": d.from_room,
                "to_room": d.to_room,
                "opening": d.opening,
            }
            for d in sorted(model.doors, key=lambda d: d.id)
        ],
    }


def serialize_model(model: BuildingModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def load_model(path: str) -> BuildingModel:
    with open(path, "rb") as fh:
        return parse_model(fh.read())
