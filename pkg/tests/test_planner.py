"""Shortest Sum B-Tree sweep and optimal path extraction against oracles."""

from __future__ import annotations

import random
from dataclasses import replace
from datetime import date

import pytest

from semnav import (
    NoPath,
    UnknownRoom,
    WeightConfig,
    build_hypergraph,
    optimal_path,
    path_weight,
    shortest_sum_b_tree,
    waypoints,
)
from semnav.hypergraph import HyperEdge, HyperNode, Hypergraph, WeightTerms
from semnav.model import Bounds, BuildingModel, Door, Room, Wall, set_hazard

from generators import random_model
from oracles import enumerate_paths, oracle_best_path

TODAY = date(2026, 1, 15)


def tiny_model(opening: str = "push") -> BuildingModel:
    rooms = tuple(
        Room(id=rid, name=rid.title(), center=(float(i), 0.0), area=60.0,
             wall_ids=("W1",), last_scan=None, hazard=False)
        for i, rid in enumerate(("alpha", "beta"))
    )
    return BuildingModel(
        rooms=rooms,
        walls=(Wall(id="W1", material_class="standard", segments=(((0.0, 0.0), (1.0, 0.0)),), thickness=0.2),),
        doors=(Door(id="D1", center=(0.5, 0.0), from_room="alpha", to_room="beta", opening=opening),),
        bounds=Bounds(-1, -1, 10, 10),
    )


class TestSweep:
    def test_start_label_is_its_own_weight(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        labels = shortest_sum_b_tree(graph, "W-CORRIDOR")
        assert labels.labels["W-CORRIDOR"] == graph.node("W-CORRIDOR").weight

    def test_two_room_label(self):
        graph = build_hypergraph(tiny_model(), WeightConfig(), TODAY)
        labels = shortest_sum_b_tree(graph, "alpha")
        # 12 + 2 + 12
        assert labels.labels["beta"] == 26.0

    def test_unknown_start(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        with pytest.raises(UnknownRoom):
            shortest_sum_b_tree(graph, "NOWHERE")

    def test_unreachable_marked(self):
        base = tiny_model()
        island = Room(id="omega", name="Omega", center=(5.0, 5.0), area=20.0,
                      wall_ids=(), last_scan=None, hazard=False)
        model = replace(base, rooms=base.rooms + (island,))
        graph = build_hypergraph(model, WeightConfig(), TODAY)
        labels = shortest_sum_b_tree(graph, "alpha")
        assert not labels.reachable("omega")
        assert labels.reachable("beta")

    def test_settled_order_nondecreasing(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        labels = shortest_sum_b_tree(graph, "W-CORRIDOR")
        values = [labels.labels[r] for r in labels.settled_order]
        assert values == sorted(values)

    def test_predecessor_chain_reaches_start(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        labels = shortest_sum_b_tree(graph, "W-CORRIDOR")
        for room_id in labels.labels:
            seen = set()
            current = room_id
            while current != "W-CORRIDOR":
                assert current not in seen
                seen.add(current)
                edge = labels.pred_edge[current]
                (current,) = tuple(edge.tail)

    def test_labels_match_exhaustive_minimum(self):
        rng = random.Random(23)
        cfg = WeightConfig()
        for _ in range(40):
            model = random_model(rng, TODAY)
            graph = build_hypergraph(model, cfg, TODAY)
            start = model.rooms[0].id
            labels = shortest_sum_b_tree(graph, start)
            for room in model.rooms:
                paths = enumerate_paths(model, cfg, TODAY, start, room.id)
                if not paths:
                    assert not labels.reachable(room.id)
                else:
                    assert labels.labels[room.id] == min(w for w, _ in paths)

    def test_multi_tail_edge_waits_for_all_tails(self):
        # Hand-built B-hypergraph: edge into "meet" requires both "a" and "b".
        def node(rid: str, w: float) -> HyperNode:
            return HyperNode(room_id=rid, name=rid, center=(0.0, 0.0),
                             terms=WeightTerms(w, 0, 0, 0), weight=w)

        nodes = (node("a", 1.0), node("b", 4.0), node("meet", 2.0), node("start", 0.0))
        edges = (
            HyperEdge(id="e-a", door_id="e-a", tail=frozenset({"start"}), head="a",
                      weight=1.0, direction_kind="push", center=(0.0, 0.0)),
            HyperEdge(id="e-b", door_id="e-b", tail=frozenset({"start"}), head="b",
                      weight=1.0, direction_kind="push", center=(0.0, 0.0)),
            HyperEdge(id="e-join", door_id="e-join", tail=frozenset({"a", "b"}), head="meet",
                      weight=1.0, direction_kind="push", center=(0.0, 0.0)),
        )
        graph = Hypergraph(nodes=tuple(sorted(nodes, key=lambda n: n.room_id)),
                           edges=tuple(sorted(edges, key=lambda e: e.id)), built_at=TODAY)
        labels = shortest_sum_b_tree(graph, "start")
        # label(meet) = label(a) + label(b) + edge + node(meet) = 2 + 5 + 1 + 2
        assert labels.labels["a"] == 2.0
        assert labels.labels["b"] == 5.0
        assert labels.labels["meet"] == 10.0


class TestOptimalPath:
    def test_adjacent_rooms_three_elements(self):
        graph = build_hypergraph(tiny_model(), WeightConfig(), TODAY)
        path = optimal_path(graph, "alpha", "beta", WeightConfig())
        assert path.semantic_path == ("alpha", "D1", "beta")
        assert path.total_weight == 26.0
        assert path.x_y_path == ((0.0, 0.0), (0.5, 0.0), (1.0, 0.0))

    def test_hazard_avoided_via_alternative(self, twocorridor, config, today):
        model = set_hazard(twocorridor, "CENTER-HALL", True)
        graph = build_hypergraph(model, config, today)
        path = optimal_path(graph, "W-CORRIDOR", "E-CORRIDOR", config)
        assert path.room_ids == ("W-CORRIDOR", "N-CORRIDOR", "E-CORRIDOR")
        assert all(w.kind != "no-safe-alternative" for w in path.warnings)
        assert all(w.kind != "hazard-on-path" for w in path.warnings)

    def test_all_routes_hazardous_warns(self, twocorridor, config, today):
        model = set_hazard(twocorridor, "CENTER-HALL", True)
        model = set_hazard(model, "N-CORRIDOR", True)
        graph = build_hypergraph(model, config, today)
        path = optimal_path(graph, "W-CORRIDOR", "E-CORRIDOR", config)
        kinds = [w.kind for w in path.warnings]
        assert kinds == ["hazard-on-path", "no-safe-alternative"]
        # lightest hazardous route: back through the center hall
        assert path.room_ids == ("W-CORRIDOR", "CENTER-HALL", "E-CORRIDOR")
        assert path.total_weight == 544.0

    def test_no_path_raises(self):
        base = tiny_model()
        island = Room(id="omega", name="Omega", center=(5.0, 5.0), area=20.0,
                      wall_ids=(), last_scan=None, hazard=False)
        model = replace(base, rooms=base.rooms + (island,))
        graph = build_hypergraph(model, WeightConfig(), TODAY)
        with pytest.raises(NoPath):
            optimal_path(graph, "alpha", "omega", WeightConfig())

    def test_same_start_end_rejected(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        with pytest.raises(ValueError):
            optimal_path(graph, "W-CORRIDOR", "W-CORRIDOR", config)

    def test_unknown_rooms(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        with pytest.raises(UnknownRoom):
            optimal_path(graph, "NOWHERE", "E-CORRIDOR", config)
        with pytest.raises(UnknownRoom):
            optimal_path(graph, "W-CORRIDOR", "NOWHERE", config)

    def test_total_weight_consistent_with_path_weight(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        path = optimal_path(graph, "W-CORRIDOR", "E-CORRIDOR", config)
        assert path.total_weight == path_weight(graph, list(path.semantic_path))

    def test_alternation_structure(self):
        rng = random.Random(5)
        cfg = WeightConfig()
        checked = 0
        while checked < 40:
            model = random_model(rng, TODAY)
            graph = build_hypergraph(model, cfg, TODAY)
            start, end = model.rooms[0].id, model.rooms[-1].id
            if start == end:
                continue
            path = optimal_path(graph, start, end, cfg)
            assert len(path.semantic_path) % 2 == 1
            assert path.semantic_path[0] == start and path.semantic_path[-1] == end
            room_ids = {r.id for r in model.rooms}
            door_ids = {d.id for d in model.doors}
            for i, item in enumerate(path.semantic_path):
                assert item in (room_ids if i % 2 == 0 else door_ids)
            assert len(path.x_y_path) == len(path.semantic_path)
            assert len(path.names) == len(path.semantic_path)
            checked += 1

    def test_direction_sensitivity_flips_by_four(self):
        cfg = WeightConfig()
        push = optimal_path(build_hypergraph(tiny_model("push"), cfg, TODAY), "alpha", "beta", cfg)
        pull = optimal_path(build_hypergraph(tiny_model("pull"), cfg, TODAY), "alpha", "beta", cfg)
        assert push.room_ids == pull.room_ids
        assert pull.total_weight - push.total_weight == 4.0

    def test_argmin_invariant_under_endpoint_weights(self, twocorridor, config, today):
        base_graph = build_hypergraph(twocorridor, config, today)
        base = optimal_path(base_graph, "W-CORRIDOR", "E-CORRIDOR", config)
        # hazard on the start room: every candidate path pays it equally
        model = set_hazard(twocorridor, "W-CORRIDOR", True)
        spiked = optimal_path(build_hypergraph(model, config, today), "W-CORRIDOR", "E-CORRIDOR", config)
        assert spiked.room_ids == base.room_ids
        assert spiked.total_weight == base.total_weight + 500.0

    def test_waypoints_verbatim_and_length(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        path = optimal_path(graph, "W-CORRIDOR", "E-CORRIDOR", config)
        pts = waypoints(path)
        assert pts == list(path.x_y_path)
        doors = len(path.door_ids)
        assert len(pts) == 2 * doors + 1
        assert pts == [(2.0, 7.0), (4.0, 3.0), (10.0, 4.0), (16.0, 5.0), (21.0, 5.0)]


class TestOracleSuite:
    def test_random_models_match_brute_force(self):
        rng = random.Random(99)
        cfg = WeightConfig()
        runs = 0
        while runs < 120:
            model = random_model(rng, TODAY)
            ids = sorted(r.id for r in model.rooms)
            start, end = rng.sample(ids, 2)
            expected = oracle_best_path(model, cfg, TODAY, start, end)
            graph = build_hypergraph(model, cfg, TODAY)
            if expected is None:
                with pytest.raises(NoPath):
                    optimal_path(graph, start, end, cfg)
            else:
                path = optimal_path(graph, start, end, cfg)
                assert path.total_weight == expected[0]
                assert path.room_ids == expected[1]  # lexicographic tie-break
            runs += 1

    def test_hazard_dominance(self):
        # whenever a hazard-free route beats the returned hazardous total, the
        # planner must not have returned a hazardous route
        rng = random.Random(1234)
        cfg = WeightConfig()
        for _ in range(60):
            model = random_model(rng, TODAY)
            ids = sorted(r.id for r in model.rooms)
            start, end = rng.sample(ids, 2)
            paths = enumerate_paths(model, cfg, TODAY, start, end)
            if not paths:
                continue
            hazards = {r.id for r in model.rooms if r.hazard}
            graph = build_hypergraph(model, cfg, TODAY)
            got = optimal_path(graph, start, end, cfg)
            clean = [w for w, seq in paths if not hazards.intersection(seq)]
            if set(got.room_ids) & hazards:
                assert not clean or min(clean) >= got.total_weight
