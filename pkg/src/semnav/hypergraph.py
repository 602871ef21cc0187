"""Weighted directed BF-hypergraph over the building's rooms and doors.

Every room becomes one node whose weight is the sum of four terms (wall
material, floor area, scan age, hazard); every door becomes two directed
hyperedges (one per traversal direction) weighted by door opening effort.
A path's weight is the sum of all its node weights plus all its edge weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from datetime import date
from functools import cached_property
from typing import Any, Sequence

from .errors import DisconnectedPath, SchemaError, UnknownRoom
from .model import BuildingModel, Door, Point, Room, Wall


@dataclass(frozen=True)
class WeightConfig:
    """Operator-editable cost table. All costs dimensionless, all >= 0."""

    wm_curtain: float = 12.0
    wm_standard: float = 4.0
    wa_small: float = 2.0
    wa_medium: float = 8.0
    wa_large: float = 12.0
    area_small_max: float = 50.0   # area < this -> small; <= area_medium_max -> medium; else large
    area_medium_max: float = 100.0
    ws_fresh: float = 10.0
    ws_recent: float = 6.0
    ws_stale: float = 0.0
    scan_fresh_max_days: int = 7   # age < this -> fresh; <= scan_recent_max_days -> recent; else stale
    scan_recent_max_days: int = 14
    wh_hazard: float = 500.0
    wd_push: float = 2.0
    wd_pull: float = 6.0
    warn_threshold: float = 500.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise SchemaError(f"{f.name} must be >= 0, got {getattr(self, f.name)}", f.name)
        if not self.area_small_max < self.area_medium_max:
            raise SchemaError("area thresholds must be strictly increasing", "area_medium_max")
        if not self.scan_fresh_max_days < self.scan_recent_max_days:
            raise SchemaError("scan-age thresholds must be strictly increasing", "scan_recent_max_days")

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "WeightConfig":
        """Build from a flat key/value document; unknown keys rejected."""
        if not isinstance(doc, dict):
            raise SchemaError("weight config must be a flat object")
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise SchemaError(f"unknown weight key(s) {sorted(unknown)}")
        kwargs: dict[str, Any] = {}
        for key, value in doc.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaError("expected a number", key)
            kwargs[key] = int(value) if key.endswith("_days") else float(value)
        return cls(**kwargs)

    def to_dict(self) -> dict[str, float | int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_json(cls, text: str | bytes) -> "WeightConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
        return cls.from_dict(doc)


@dataclass(frozen=True)
class WeightTerms:
    w_m: float
    w_a: float
    w_s: float
    w_h: float

    @property
    def total(self) -> float:
        return self.w_m + self.w_a + self.w_s + self.w_h


@dataclass(frozen=True)
class HyperNode:
    room_id: str
    name: str
    center: Point
    terms: WeightTerms
    weight: float  # == terms.total


@dataclass(frozen=True)
class HyperEdge:
    id: str        # door id + direction suffix, unique per edge
    door_id: str
    tail: frozenset[str]
    head: str
    weight: float
    direction_kind: str  # "push" | "pull"
    center: Point


@dataclass(frozen=True)
class Hypergraph:
    nodes: tuple[HyperNode, ...]   # sorted by room_id
    edges: tuple[HyperEdge, ...]   # sorted by edge id
    built_at: date

    @cached_property
    def _node_index(self) -> dict[str, HyperNode]:
        return {n.room_id: n for n in self.nodes}

    @cached_property
    def _edges_by_tail_member(self) -> dict[str, tuple[HyperEdge, ...]]:
        index: dict[str, list[HyperEdge]] = {n.room_id: [] for n in self.nodes}
        for e in self.edges:
            for t in e.tail:
                index[t].append(e)
        return {k: tuple(v) for k, v in index.items()}

    def node(self, room_id: str) -> HyperNode:
        try:
            return self._node_index[room_id]
        except KeyError:
            raise UnknownRoom(f"no node for room {room_id!r}") from None

    def has_node(self, room_id: str) -> bool:
        return room_id in self._node_index

    def edges_with_tail(self, room_id: str) -> tuple[HyperEdge, ...]:
        """Edges having room_id among their tail nodes."""
        return self._edges_by_tail_member.get(room_id, ())


# ---------------------------------------------------------------------------
# Weight evaluation
# ---------------------------------------------------------------------------

def scan_age_days(room: Room, today: date) -> int | None:
    """Whole days since the last scan; None when never scanned."""
    if room.last_scan is None:
        return None
    return (today - room.last_scan).days


def node_weight(room: Room, walls: Sequence[Wall], config: WeightConfig, today: date) -> HyperNode:
    """Evaluate the four per-room cost terms and their sum."""
    w_m = config.wm_curtain if any(w.material_class == "curtain" for w in walls) else config.wm_standard

    if room.area < config.area_small_max:
        w_a = config.wa_small
    elif room.area <= config.area_medium_max:
        w_a = config.wa_medium
    else:
        w_a = config.wa_large

    age = scan_age_days(room, today)
    if age is None or age > config.scan_recent_max_days:
        w_s = config.ws_stale
    elif age < config.scan_fresh_max_days:
        w_s = config.ws_fresh
    else:
        w_s = config.ws_recent

    w_h = config.wh_hazard if room.hazard else 0.0

    terms = WeightTerms(w_m=w_m, w_a=w_a, w_s=w_s, w_h=w_h)
    return HyperNode(room_id=room.id, name=room.name, center=room.center, terms=terms, weight=terms.total)


def edge_weights(door: Door, config: WeightConfig) -> tuple[HyperEdge, HyperEdge]:
    """Two directed edges per door: stored opening forward, complement back."""
    reverse_kind = "pull" if door.opening == "push" else "push"
    cost = {"push": config.wd_push, "pull": config.wd_pull}
    forward = HyperEdge(
        id=f"{door.id}:fwd",
        door_id=door.id,
        tail=frozenset((door.from_room,)),
        head=door.to_room,
        weight=cost[door.opening],
        direction_kind=door.opening,
        center=door.center,
    )
    reverse = HyperEdge(
        id=f"{door.id}:rev",
        door_id=door.id,
        tail=frozenset((door.to_room,)),
        head=door.from_room,
        weight=cost[reverse_kind],
        direction_kind=reverse_kind,
        center=door.center,
    )
    return forward, reverse


def build_hypergraph(model: BuildingModel, config: WeightConfig, today: date) -> Hypergraph:
    """Pure function of (model, config, today); deterministic ordering by id."""
    nodes = tuple(
        node_weight(room, model.walls_of(room), config, today)
        for room in sorted(model.rooms, key=lambda r: r.id)
    )
    edges: list[HyperEdge] = []
    for door in model.doors:
        edges.extend(edge_weights(door, config))
    edges.sort(key=lambda e: e.id)
    return Hypergraph(nodes=nodes, edges=tuple(edges), built_at=today)


def path_weight(graph: Hypergraph, path: Sequence[str]) -> float:
    """Sum node and edge weights over an alternating room/door id sequence.

    Every node on the path counts, including both endpoints. The door id at
    each odd position must resolve to a directed edge whose tail contains the
    preceding room and whose head is the following room.
    """
    if len(path) % 2 == 0 or not path:
        raise DisconnectedPath("path must alternate room, door, ..., room")
    total = graph.node(path[0]).weight
    for i in range(1, len(path), 2):
        door_id, nxt = path[i], path[i + 1]
        edge = _matching_edge(graph, door_id, path[i - 1], nxt)
        if edge is None:
            raise DisconnectedPath(f"door {door_id!r} does not connect {path[i - 1]!r} to {nxt!r}")
        total += edge.weight + graph.node(nxt).weight
    return total


def _matching_edge(graph: Hypergraph, door_id: str, tail_room: str, head_room: str) -> HyperEdge | None:
    for edge in graph.edges_with_tail(tail_room):
        if edge.door_id == door_id and edge.head == head_room:
            return edge
    return None
