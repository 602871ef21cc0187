"""Semantic building navigation stack.

Pipeline: parse a building exchange file, build the weighted room/door
hypergraph, plan an optimal (not necessarily shortest) room sequence,
cascade it into metric A* on a wall-derived occupancy grid, and execute
the mission on a simulated robot driven from a service or the CLI.
"""

from .errors import (
    DisconnectedPath,
    GeometryError,
    GoalOccupied,
    IntegrityError,
    NoGridPath,
    NoPath,
    ResolutionTooCoarse,
    SchemaError,
    SemnavError,
    SnapError,
    StartOccupied,
    UnknownRoom,
)
from .grid import GridPath, OccupancyGrid, astar, grid_to_pgm, inflate, rasterize, stitch
from .hypergraph import (
    HyperEdge,
    HyperNode,
    Hypergraph,
    WeightConfig,
    build_hypergraph,
    edge_weights,
    node_weight,
    path_weight,
)
from .model import (
    BuildingModel,
    Door,
    Room,
    Wall,
    load_model,
    parse_model,
    room_adjacency,
    serialize_model,
    set_hazard,
    validate_model,
)
from .planner import BTreeLabels, SemanticPath, optimal_path, shortest_sum_b_tree, waypoints
from .sim import MissionScript, MissionState, RobotState, SimParams, run_script, start_mission, step

__version__ = "0.1.0"

__all__ = [
    "BuildingModel", "Room", "Wall", "Door",
    "parse_model", "validate_model", "room_adjacency", "serialize_model",
    "set_hazard", "load_model",
    "WeightConfig", "Hypergraph", "HyperNode", "HyperEdge",
    "node_weight", "edge_weights", "build_hypergraph", "path_weight",
    "BTreeLabels", "SemanticPath", "shortest_sum_b_tree", "optimal_path", "waypoints",
    "OccupancyGrid", "GridPath", "rasterize", "inflate", "astar", "stitch", "grid_to_pgm",
    "MissionState", "MissionScript", "RobotState", "SimParams", "start_mission", "step", "run_script",
    "SemnavError", "SchemaError", "IntegrityError", "GeometryError",
    "DisconnectedPath", "UnknownRoom", "NoPath", "ResolutionTooCoarse",
    "StartOccupied", "GoalOccupied", "NoGridPath", "SnapError",
]
