"""Optimal room-to-room paths on the weighted hypergraph.

The sweep is a Shortest Sum B-Tree: label-setting over B-hyperedges, where an
edge becomes relaxable only once every tail node is settled and its candidate
label is the sum of the tail labels plus the edge and head weights. Door
edges have a single tail node, for which the sweep degenerates to Dijkstra,
but the relaxation rule is implemented for |tail| >= 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterator

from .errors import NoPath, UnknownRoom
from .hypergraph import HyperEdge, Hypergraph, WeightConfig
from .model import Point


@dataclass(frozen=True)
class Warning_:
    kind: str  # "hazard-on-path" | "no-safe-alternative"
    room_ids: tuple[str, ...]


@dataclass(frozen=True)
class SemanticPath:
    semantic_path: tuple[str, ...]  # room id, door id, room id, ...
    names: tuple[str, ...]          # room names; door ids stand in for doors
    x_y_path: tuple[Point, ...]     # room/door centers in traversal order
    total_weight: float
    warnings: tuple[Warning_, ...]

    @property
    def room_ids(self) -> tuple[str, ...]:
        return self.semantic_path[::2]

    @property
    def door_ids(self) -> tuple[str, ...]:
        return self.semantic_path[1::2]

    def to_dict(self) -> dict:
        return {
            "semantic_path": list(self.semantic_path),
            "names": list(self.names),
            "x_y_path": [list(p) for p in self.x_y_path],
            "total_weight": self.total_weight,
            "warnings": [{"kind": w.kind, "room_ids": list(w.room_ids)} for w in self.warnings],
        }


@dataclass
class BTreeLabels:
    """Result of one label-setting sweep from a start node."""

    start: str
    labels: dict[str, float] = field(default_factory=dict)       # settled cumulative weights
    pred_edge: dict[str, HyperEdge] = field(default_factory=dict)
    settled_order: list[str] = field(default_factory=list)

    def reachable(self, room_id: str) -> bool:
        return room_id in self.labels


def shortest_sum_b_tree(graph: Hypergraph, start: str, config: WeightConfig | None = None) -> BTreeLabels:
    """Minimum cumulative weight from start to every reachable node.

    A node's label includes its own weight and the start's. `config` is
    accepted for interface symmetry with optimal_path; all weights are already
    baked into the graph.
    """
    del config
    start_node = graph.node(start)  # raises UnknownRoom
    result = BTreeLabels(start=start)
    tentative: dict[str, float] = {start: start_node.weight}
    # B-edge rule: an edge may relax only once every tail node is settled.
    waiting_tails: dict[str, int] = {e.id: len(e.tail) for e in graph.edges}
    heap: list[tuple[float, str]] = [(start_node.weight, start)]

    while heap:
        label, room_id = heapq.heappop(heap)
        if room_id in result.labels:
            continue  # stale entry
        result.labels[room_id] = label
        result.settled_order.append(room_id)
        for edge in graph.edges_with_tail(room_id):
            waiting_tails[edge.id] -= 1
            if waiting_tails[edge.id] > 0:
                continue
            if edge.head in result.labels:
                continue
            candidate = sum(result.labels[t] for t in sorted(edge.tail))
            candidate += edge.weight + graph.node(edge.head).weight
            if candidate < tentative.get(edge.head, float("inf")):
                tentative[edge.head] = candidate
                result.pred_edge[edge.head] = edge
                heapq.heappush(heap, (candidate, edge.head))
    return result


def optimal_path(graph: Hypergraph, start: str, end: str, config: WeightConfig) -> SemanticPath:
    """Minimum-weight path start -> end with deterministic tie-breaking.

    Among equal-weight optima the lexicographically smallest room-id sequence
    wins. Warnings: hazard-on-path when any path node carries a hazard term;
    no-safe-alternative additionally when the total reaches warn_threshold.
    """
    if start == end:
        raise ValueError("start and end must differ")
    if not graph.has_node(start):
        raise UnknownRoom(f"no node for room {start!r}")
    if not graph.has_node(end):
        raise UnknownRoom(f"no node for room {end!r}")

    labels = shortest_sum_b_tree(graph, start)
    if not labels.reachable(end):
        raise NoPath(f"no path from {start!r} to {end!r}")

    rooms, edges = _lex_min_tight_path(graph, labels, start, end)

    semantic: list[str] = [rooms[0]]
    points: list[Point] = [graph.node(rooms[0]).center]
    names: list[str] = [graph.node(rooms[0]).name]
    for edge, room_id in zip(edges, rooms[1:]):
        node = graph.node(room_id)
        semantic.extend((edge.door_id, room_id))
        names.extend((edge.door_id, node.name))
        points.extend((edge.center, node.center))

    total = labels.labels[end]
    hazardous = tuple(r for r in rooms if graph.node(r).terms.w_h > 0)
    warnings: list[Warning_] = []
    if hazardous:
        warnings.append(Warning_(kind="hazard-on-path", room_ids=hazardous))
        if total >= config.warn_threshold:
            warnings.append(Warning_(kind="no-safe-alternative", room_ids=hazardous))

    return SemanticPath(
        semantic_path=tuple(semantic),
        names=tuple(names),
        x_y_path=tuple(points),
        total_weight=total,
        warnings=tuple(warnings),
    )


def waypoints(path: SemanticPath) -> list[Point]:
    """Center points of each room and door in traversal order (2k+1 for k doors)."""
    return list(path.x_y_path)


# ---------------------------------------------------------------------------
# Tie-break reconstruction
# ---------------------------------------------------------------------------

def _tight_successors(graph: Hypergraph, labels: BTreeLabels, room_id: str) -> Iterator[HyperEdge]:
    """Single-tail edges from room_id lying on some minimum-weight path."""
    base = labels.labels.get(room_id)
    if base is None:
        return
    for edge in graph.edges_with_tail(room_id):
        if len(edge.tail) != 1:
            continue  # alternating room/door reconstruction is defined on single-tail chains
        head_label = labels.labels.get(edge.head)
        if head_label is None:
            continue
        if base + edge.weight + graph.node(edge.head).weight == head_label:
            yield edge


def _lex_min_tight_path(
    graph: Hypergraph, labels: BTreeLabels, start: str, end: str
) -> tuple[list[str], list[HyperEdge]]:
    """DFS over tight edges in (head id, door id) order; first hit is lex-min."""
    rooms = [start]
    edges: list[HyperEdge] = []
    visited = {start}

    def descend(current: str) -> bool:
        if current == end:
            return True
        for edge in sorted(_tight_successors(graph, labels, current), key=lambda e: (e.head, e.door_id)):
            if edge.head in visited:
                continue
            visited.add(edge.head)
            rooms.append(edge.head)
            edges.append(edge)
            if descend(edge.head):
                return True
            visited.discard(edge.head)
            rooms.pop()
            edges.pop()
        return False

    if not descend(start):
        # Labels said reachable; only a non-single-tail predecessor chain can get here.
        raise NoPath(f"no single-tail path from {start!r} to {end!r}")
    return rooms, edges
