"""Weight table, node/edge weighting, graph construction, and path sums."""

from __future__ import annotations

import random
from dataclasses import replace
from datetime import date, timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semnav import DisconnectedPath, SchemaError, WeightConfig, build_hypergraph, path_weight
from semnav.hypergraph import edge_weights, node_weight
from semnav.model import Bounds, BuildingModel, Door, Room, Wall

from generators import random_model
from oracles import oracle_node_weight

TODAY = date(2026, 1, 15)


def make_room(area: float, scanned_days_ago: int | None, hazard: bool, wall_ids=("W1",)) -> Room:
    return Room(
        id="R1",
        name="Room",
        center=(1.0, 1.0),
        area=area,
        wall_ids=tuple(wall_ids),
        last_scan=None if scanned_days_ago is None else TODAY - timedelta(days=scanned_days_ago),
        hazard=hazard,
    )


def make_wall(material: str) -> Wall:
    return Wall(id="W1", material_class=material, segments=(((0.0, 0.0), (1.0, 0.0)),), thickness=0.2)


class TestWeightConfig:
    def test_defaults_match_the_published_constants(self):
        cfg = WeightConfig()
        assert (cfg.wm_curtain, cfg.wm_standard) == (12.0, 4.0)
        assert (cfg.wa_small, cfg.wa_medium, cfg.wa_large) == (2.0, 8.0, 12.0)
        assert (cfg.ws_fresh, cfg.ws_recent, cfg.ws_stale) == (10.0, 6.0, 0.0)
        assert cfg.wh_hazard == 500.0
        assert (cfg.wd_push, cfg.wd_pull) == (2.0, 6.0)
        assert cfg.warn_threshold == 500.0
        assert (cfg.area_small_max, cfg.area_medium_max) == (50.0, 100.0)
        assert (cfg.scan_fresh_max_days, cfg.scan_recent_max_days) == (7, 14)

    def test_negative_value_rejected(self):
        with pytest.raises(SchemaError, match="wd_push"):
            WeightConfig(wd_push=-1)

    def test_threshold_ordering_enforced(self):
        with pytest.raises(SchemaError):
            WeightConfig(area_small_max=100, area_medium_max=100)
        with pytest.raises(SchemaError):
            WeightConfig(scan_fresh_max_days=14, scan_recent_max_days=7)

    def test_unknown_key_rejected(self):
        with pytest.raises(SchemaError, match="wx_bogus"):
            WeightConfig.from_dict({"wx_bogus": 1})

    def test_round_trip(self):
        cfg = WeightConfig(wd_pull=9.0)
        assert WeightConfig.from_dict(cfg.to_dict()) == cfg


class TestNodeWeight:
    def test_medium_stale_standard(self):
        # area 60, standard walls, scanned 21 days ago, no hazard
        node = node_weight(make_room(60, 21, False), [make_wall("standard")], WeightConfig(), TODAY)
        assert (node.terms.w_m, node.terms.w_a, node.terms.w_s, node.terms.w_h) == (4, 8, 0, 0)
        assert node.weight == 12

    def test_small_fresh_curtain_hazard(self):
        # area 40, one curtain wall, scanned 3 days ago, hazard
        node = node_weight(make_room(40, 3, True), [make_wall("curtain")], WeightConfig(), TODAY)
        assert (node.terms.w_m, node.terms.w_a, node.terms.w_s, node.terms.w_h) == (12, 2, 10, 500)
        assert node.weight == 524

    def test_boundary_area_never_scanned(self):
        # exactly 50 m2 falls in the middle bucket; never scanned counts stale
        node = node_weight(make_room(50, None, False), [make_wall("standard")], WeightConfig(), TODAY)
        assert (node.terms.w_m, node.terms.w_a, node.terms.w_s, node.terms.w_h) == (4, 8, 0, 0)
        assert node.weight == 12

    @pytest.mark.parametrize("area,expected", [
        (49.999, 2.0), (50.0, 8.0), (75.0, 8.0), (100.0, 8.0), (100.001, 12.0), (500.0, 12.0),
    ])
    def test_area_buckets(self, area, expected):
        node = node_weight(make_room(area, None, False), [make_wall("standard")], WeightConfig(), TODAY)
        assert node.terms.w_a == expected

    @pytest.mark.parametrize("days,expected", [
        (0, 10.0), (6, 10.0), (7, 6.0), (10, 6.0), (14, 6.0), (15, 0.0), (365, 0.0), (None, 0.0),
    ])
    def test_scan_age_buckets(self, days, expected):
        node = node_weight(make_room(60, days, False), [make_wall("standard")], WeightConfig(), TODAY)
        assert node.terms.w_s == expected

    def test_any_curtain_wall_makes_the_room_curtain(self):
        walls = [make_wall("standard"), replace(make_wall("curtain"), id="W2")]
        node = node_weight(make_room(60, None, False), walls, WeightConfig(), TODAY)
        assert node.terms.w_m == 12.0

    def test_decomposition_invariant(self):
        rng = random.Random(7)
        for _ in range(50):
            model = random_model(rng, TODAY)
            graph = build_hypergraph(model, WeightConfig(), TODAY)
            for node in graph.nodes:
                t = node.terms
                assert node.weight == t.w_m + t.w_a + t.w_s + t.w_h

    def test_matches_oracle_on_random_rooms(self):
        rng = random.Random(11)
        cfg = WeightConfig()
        for _ in range(50):
            model = random_model(rng, TODAY)
            graph = build_hypergraph(model, cfg, TODAY)
            for room in model.rooms:
                assert graph.node(room.id).weight == oracle_node_weight(model, room, cfg, TODAY)


class TestEdgeWeights:
    def door(self, opening: str) -> Door:
        return Door(id="D1", center=(1.0, 1.0), from_room="A", to_room="B", opening=opening)

    def test_push_door(self):
        fwd, rev = edge_weights(self.door("push"), WeightConfig())
        assert fwd.weight == 2.0 and rev.weight == 6.0
        assert fwd.tail == frozenset({"A"}) and fwd.head == "B"
        assert rev.tail == frozenset({"B"}) and rev.head == "A"

    def test_pull_door(self):
        fwd, rev = edge_weights(self.door("pull"), WeightConfig())
        assert fwd.weight == 6.0 and rev.weight == 2.0

    def test_complement_multiset(self):
        for opening in ("push", "pull"):
            fwd, rev = edge_weights(self.door(opening), WeightConfig())
            assert sorted((fwd.weight, rev.weight)) == [2.0, 6.0]
            assert {fwd.direction_kind, rev.direction_kind} == {"push", "pull"}


class TestBuildHypergraph:
    def one_room_model(self) -> BuildingModel:
        return BuildingModel(
            rooms=(make_room(60, None, False, wall_ids=("W1",)),),
            walls=(make_wall("standard"),),
            doors=(),
            bounds=Bounds(0, 0, 10, 10),
        )

    def test_one_room_no_doors(self):
        graph = build_hypergraph(self.one_room_model(), WeightConfig(), TODAY)
        assert len(graph.nodes) == 1 and len(graph.edges) == 0

    def test_two_rooms_one_door(self):
        base = self.one_room_model()
        model = BuildingModel(
            rooms=base.rooms + (replace(base.rooms[0], id="R2", center=(2.0, 2.0)),),
            walls=base.walls,
            doors=(Door(id="D1", center=(1.5, 1.5), from_room="R1", to_room="R2", opening="push"),),
            bounds=base.bounds,
        )
        graph = build_hypergraph(model, WeightConfig(), TODAY)
        assert len(graph.nodes) == 2 and len(graph.edges) == 2

    def test_fixture_counts(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        assert len(graph.nodes) == 5
        assert len(graph.edges) == 12  # 2 per door

    def test_two_edges_per_door_complement(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        by_door: dict[str, list] = {}
        for e in graph.edges:
            by_door.setdefault(e.door_id, []).append(e)
        assert all(len(pair) == 2 for pair in by_door.values())
        for a, b in by_door.values():
            assert {a.direction_kind, b.direction_kind} == {"push", "pull"}
            assert a.tail == frozenset({b.head}) and b.tail == frozenset({a.head})

    def test_rebuild_determinism(self, twocorridor, config, today):
        g1 = build_hypergraph(twocorridor, config, today)
        g2 = build_hypergraph(twocorridor, config, today)
        assert g1.nodes == g2.nodes
        assert g1.edges == g2.edges

    def test_ordering_sorted_by_id(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        assert [n.room_id for n in graph.nodes] == sorted(n.room_id for n in graph.nodes)
        assert [e.id for e in graph.edges] == sorted(e.id for e in graph.edges)


class TestPathWeight:
    def test_single_node(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        assert path_weight(graph, ["W-CORRIDOR"]) == graph.node("W-CORRIDOR").weight

    def test_two_nodes_and_edge(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        # 12 (west corridor) + 2 (push) + 16 (center hall) per the fixture
        assert path_weight(graph, ["W-CORRIDOR", "D-WC", "CENTER-HALL"]) == 30.0

    def test_brute_force_resummation(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        path = ["W-CORRIDOR", "D-WC", "CENTER-HALL", "D-CE", "E-CORRIDOR"]
        expected = (
            graph.node("W-CORRIDOR").weight
            + graph.node("CENTER-HALL").weight
            + graph.node("E-CORRIDOR").weight
            + 2.0  # D-WC push forward
            + 2.0  # D-CE push forward
        )
        assert path_weight(graph, path) == expected

    def test_disconnected_raises(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        with pytest.raises(DisconnectedPath):
            path_weight(graph, ["W-CORRIDOR", "D-CE", "E-CORRIDOR"])
        with pytest.raises(DisconnectedPath):
            path_weight(graph, ["W-CORRIDOR", "D-WC"])

    def test_reverse_direction_uses_complement_cost(self, twocorridor, config, today):
        graph = build_hypergraph(twocorridor, config, today)
        # D-WC is push when headed into the hall, so pull (6) on the way back
        assert path_weight(graph, ["CENTER-HALL", "D-WC", "W-CORRIDOR"]) == 16.0 + 6.0 + 12.0


@st.composite
def config_bumps(draw):
    field = draw(st.sampled_from([
        "wm_curtain", "wm_standard", "wa_small", "wa_medium", "wa_large",
        "ws_fresh", "ws_recent", "ws_stale", "wh_hazard", "wd_push", "wd_pull",
    ]))
    bump = draw(st.floats(min_value=0.0, max_value=50.0, allow_nan=False))
    return field, bump


class TestMonotonicity:
    @given(config_bumps(), st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_raising_any_constant_never_decreases_weights(self, bump, seed):
        field, delta = bump
        rng = random.Random(seed)
        model = random_model(rng, TODAY, max_rooms=6, max_doors=10)
        base_cfg = WeightConfig()
        bumped_cfg = WeightConfig(**{**base_cfg.to_dict(), field: getattr(base_cfg, field) + delta})
        g_base = build_hypergraph(model, base_cfg, TODAY)
        g_bump = build_hypergraph(model, bumped_cfg, TODAY)
        for n_base, n_bump in zip(g_base.nodes, g_bump.nodes):
            assert n_bump.weight >= n_base.weight
        for e_base, e_bump in zip(g_base.edges, g_bump.edges):
            assert e_bump.weight >= e_base.weight
