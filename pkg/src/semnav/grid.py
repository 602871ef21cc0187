"""Occupancy grid rasterization, inflation, and metric A* between waypoints.

Grids store binary occupancy in a numpy array indexed ``occupied[iy, ix]``
with row 0 at the bottom (y grows with iy). Cells are addressed as (ix, iy)
tuples to match (x, y) point order; ``origin`` is the world position of cell
(0, 0)'s lower-left corner. PGM export flips rows so row 0 is the top.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage

from .errors import GoalOccupied, NoGridPath, ResolutionTooCoarse, SnapError, StartOccupied
from .model import BuildingModel, Point

Cell = tuple[int, int]  # (ix, iy)

SQRT2 = math.sqrt(2.0)
DEFAULT_RESOLUTION = 0.05
DEFAULT_INFLATE_RADIUS = 0.5
SNAP_RADIUS = 0.5


@dataclass(frozen=True)
class OccupancyGrid:
    resolution: float
    origin: Point
    width: int
    height: int
    occupied: np.ndarray  # bool, shape (height, width)

    def __post_init__(self) -> None:
        assert self.occupied.shape == (self.height, self.width)

    def cell_of(self, p: Point) -> Cell:
        ix = int(math.floor((p[0] - self.origin[0]) / self.resolution))
        iy = int(math.floor((p[1] - self.origin[1]) / self.resolution))
        return ix, iy

    def center_of(self, cell: Cell) -> Point:
        ix, iy = cell
        return (
            self.origin[0] + (ix + 0.5) * self.resolution,
            self.origin[1] + (iy + 0.5) * self.resolution,
        )

    def in_grid(self, cell: Cell) -> bool:
        ix, iy = cell
        return 0 <= ix < self.width and 0 <= iy < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_grid(cell) and not self.occupied[cell[1], cell[0]]

    def point_free(self, p: Point) -> bool:
        return self.is_free(self.cell_of(p))


@dataclass(frozen=True)
class GridPath:
    cells: tuple[Cell, ...]
    points: tuple[Point, ...]
    length: float  # meters; sum of 1 / sqrt(2) steps times resolution


# ---------------------------------------------------------------------------
# Rasterization
# ---------------------------------------------------------------------------

def rasterize(model: BuildingModel, resolution: float = DEFAULT_RESOLUTION) -> OccupancyGrid:
    """Draw every wall segment as a stroke of width = wall thickness.

    Curtain walls rasterize exactly like standard ones: the geometry is known
    from the model even though range sensors cannot see it. Cells are occupied
    when their center lies within thickness/2 of a segment; additionally every
    cell the centerline crosses is occupied, so no segment can vanish.
    """
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    if model.walls:
        thinnest = min(w.thickness for w in model.walls)
        if resolution > thinnest:
            raise ResolutionTooCoarse(
                f"resolution {resolution} exceeds thinnest wall {thinnest}"
            )
    b = model.bounds
    width = max(1, int(math.ceil((b.x_max - b.x_min) / resolution)))
    height = max(1, int(math.ceil((b.y_max - b.y_min) / resolution)))
    occupied = np.zeros((height, width), dtype=bool)
    grid = OccupancyGrid(resolution=resolution, origin=(b.x_min, b.y_min), width=width, height=height, occupied=occupied)

    for wall in model.walls:
        half = wall.thickness / 2.0
        for seg in wall.segments:
            _stroke_segment(grid, seg, half)
            _mark_centerline(grid, seg)
    return grid


def _stroke_segment(grid: OccupancyGrid, seg: tuple[Point, Point], half: float) -> None:
    (ax, ay), (bx, by) = seg
    res = grid.resolution
    x0 = int(math.floor((min(ax, bx) - half - grid.origin[0]) / res)) - 1
    x1 = int(math.ceil((max(ax, bx) + half - grid.origin[0]) / res)) + 1
    y0 = int(math.floor((min(ay, by) - half - grid.origin[1]) / res)) - 1
    y1 = int(math.ceil((max(ay, by) + half - grid.origin[1]) / res)) + 1
    x0, x1 = max(0, x0), min(grid.width, x1)
    y0, y1 = max(0, y0), min(grid.height, y1)
    if x0 >= x1 or y0 >= y1:
        return
    xs = grid.origin[0] + (np.arange(x0, x1) + 0.5) * res
    ys = grid.origin[1] + (np.arange(y0, y1) + 0.5) * res
    cx, cy = np.meshgrid(xs, ys)
    dx, dy = bx - ax, by - ay
    seg_len_sq = dx * dx + dy * dy
    t = ((cx - ax) * dx + (cy - ay) * dy) / seg_len_sq
    t = np.clip(t, 0.0, 1.0)
    dist_sq = (cx - (ax + t * dx)) ** 2 + (cy - (ay + t * dy)) ** 2
    grid.occupied[y0:y1, x0:x1] |= dist_sq <= half * half


def _mark_centerline(grid: OccupancyGrid, seg: tuple[Point, Point]) -> None:
    (ax, ay), (bx, by) = seg
    length = math.hypot(bx - ax, by - ay)
    steps = max(1, int(math.ceil(length / (grid.resolution / 4.0))))
    for k in range(steps + 1):
        t = k / steps
        cell = grid.cell_of((ax + t * (bx - ax), ay + t * (by - ay)))
        ix = min(max(cell[0], 0), grid.width - 1)
        iy = min(max(cell[1], 0), grid.height - 1)
        grid.occupied[iy, ix] = True


# ---------------------------------------------------------------------------
# Inflation
# ---------------------------------------------------------------------------

def inflate(grid: OccupancyGrid, radius: float) -> OccupancyGrid:
    """Occupy every cell within Euclidean `radius` of an occupied cell.

    Distances are measured between cell centers; radius 0 is the identity.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    k = int(math.floor(radius / grid.resolution + 1e-9))
    if k == 0:
        return OccupancyGrid(
            resolution=grid.resolution,
            origin=grid.origin,
            width=grid.width,
            height=grid.height,
            occupied=grid.occupied.copy(),
        )
    offsets = np.arange(-k, k + 1)
    di, dj = np.meshgrid(offsets, offsets)
    footprint = (di * di + dj * dj) * grid.resolution**2 <= radius * radius + 1e-9
    dilated = ndimage.binary_dilation(grid.occupied, structure=footprint)
    return OccupancyGrid(
        resolution=grid.resolution,
        origin=grid.origin,
        width=grid.width,
        height=grid.height,
        occupied=dilated,
    )


# ---------------------------------------------------------------------------
# A*
# ---------------------------------------------------------------------------

# (dx, dy, is_diagonal)
_MOVES = (
    (1, 0, False), (-1, 0, False), (0, 1, False), (0, -1, False),
    (1, 1, True), (1, -1, True), (-1, 1, True), (-1, -1, True),
)


def _octile(a: Cell, b: Cell, resolution: float) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    straight, diag = (dx - dy, dy) if dx >= dy else (dy - dx, dx)
    return (straight + diag * SQRT2) * resolution


def astar(grid: OccupancyGrid, from_point: Point, to_point: Point) -> GridPath:
    """Shortest 8-connected path under step costs {1, sqrt(2)} * resolution.

    Octile heuristic (admissible, so the result is optimal). Diagonal moves
    are disallowed when either adjacent orthogonal cell is occupied, keeping
    the path out of wall corners. Ties pop in row-major cell order.
    """
    start = grid.cell_of(from_point)
    goal = grid.cell_of(to_point)
    if not grid.is_free(start):
        raise StartOccupied(f"start point {from_point} maps to occupied or off-grid cell {start}")
    if not grid.is_free(goal):
        raise GoalOccupied(f"goal point {to_point} maps to occupied or off-grid cell {goal}")
    if start == goal:
        return GridPath(cells=(start,), points=(grid.center_of(start),), length=0.0)

    res = grid.resolution
    occ = grid.occupied
    width = grid.width

    def row_major(c: Cell) -> int:
        return c[1] * width + c[0]

    g_cost: dict[Cell, float] = {start: 0.0}
    steps: dict[Cell, tuple[int, int]] = {start: (0, 0)}  # (straight, diagonal) counts
    came_from: dict[Cell, Cell] = {}
    heap: list[tuple[float, int, Cell]] = [(_octile(start, goal, res), row_major(start), start)]
    closed: set[Cell] = set()

    while heap:
        _, _, current = heapq.heappop(heap)
        if current in closed:
            continue
        if current == goal:
            return _reconstruct(grid, came_from, steps[goal], goal)
        closed.add(current)
        cx, cy = current
        g_here = g_cost[current]
        s_here, d_here = steps[current]
        for dx, dy, diag in _MOVES:
            nxt = (cx + dx, cy + dy)
            if not grid.in_grid(nxt) or occ[nxt[1], nxt[0]]:
                continue
            if diag and (occ[cy, cx + dx] or occ[cy + dy, cx]):
                continue  # no corner cutting
            g_new = g_here + (SQRT2 if diag else 1.0) * res
            if g_new < g_cost.get(nxt, float("inf")):
                g_cost[nxt] = g_new
                steps[nxt] = (s_here, d_here + 1) if diag else (s_here + 1, d_here)
                came_from[nxt] = current
                heapq.heappush(heap, (g_new + _octile(nxt, goal, res), row_major(nxt), nxt))
    raise NoGridPath(f"free space between {from_point} and {to_point} is disconnected")


def _reconstruct(grid: OccupancyGrid, came_from: dict[Cell, Cell], counts: tuple[int, int], goal: Cell) -> GridPath:
    cells = [goal]
    while cells[-1] in came_from:
        cells.append(came_from[cells[-1]])
    cells.reverse()
    straight, diag = counts
    return GridPath(
        cells=tuple(cells),
        points=tuple(grid.center_of(c) for c in cells),
        length=(straight + diag * SQRT2) * grid.resolution,
    )


# ---------------------------------------------------------------------------
# Waypoint stitching
# ---------------------------------------------------------------------------

def snap_to_free(grid: OccupancyGrid, p: Point, radius: float = SNAP_RADIUS) -> Cell:
    """Nearest free cell (center metric) within `radius` of the point."""
    home = grid.cell_of(p)
    if grid.is_free(home):
        return home
    k = int(math.ceil(radius / grid.resolution)) + 1
    best: tuple[float, int, Cell] | None = None
    for iy in range(max(0, home[1] - k), min(grid.height, home[1] + k + 1)):
        for ix in range(max(0, home[0] - k), min(grid.width, home[0] + k + 1)):
            if grid.occupied[iy, ix]:
                continue
            cx, cy = grid.center_of((ix, iy))
            dist = math.hypot(cx - p[0], cy - p[1])
            if dist <= radius:
                key = (dist, iy * grid.width + ix, (ix, iy))
                if best is None or key < best:
                    best = key
    if best is None:
        raise SnapError(f"no free cell within {radius} m of {p}")
    return best[2]


def stitch(grid: OccupancyGrid, points: Sequence[Point], snap_radius: float = SNAP_RADIUS) -> GridPath:
    """Concatenate A* legs between consecutive waypoints.

    Waypoints on occupied cells snap to the nearest free cell within the snap
    radius (door centers land inside inflated wall strokes). Duplicate
    junction cells are dropped; every waypoint's snapped cell appears in order.
    """
    if len(points) < 2:
        raise ValueError("stitch needs at least 2 waypoints")
    snapped: list[Cell] = []
    for i, p in enumerate(points):
        try:
            snapped.append(snap_to_free(grid, p, snap_radius))
        except SnapError as exc:
            raise SnapError(f"waypoint {i}: {exc}", waypoint=i) from None

    cells: list[Cell] = []
    straight = diag = 0
    for i in range(len(snapped) - 1):
        try:
            leg = astar(grid, grid.center_of(snapped[i]), grid.center_of(snapped[i + 1]))
        except NoGridPath as exc:
            raise NoGridPath(f"leg {i}: {exc}", leg=i) from None
        leg_cells = leg.cells if not cells else leg.cells[1:]
        cells.extend(leg_cells)
        prev = leg.cells[0]
        for c in leg.cells[1:]:
            if abs(c[0] - prev[0]) + abs(c[1] - prev[1]) == 2:
                diag += 1
            else:
                straight += 1
            prev = c
    return GridPath(
        cells=tuple(cells),
        points=tuple(grid.center_of(c) for c in cells),
        length=(straight + diag * SQRT2) * grid.resolution,
    )


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def grid_to_pgm(grid: OccupancyGrid) -> bytes:
    """Binary P5 graymap, 0 = occupied, 255 = free, row 0 = top."""
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    rows = np.where(grid.occupied[::-1, :], 0, 255).astype(np.uint8)
    return header + rows.tobytes()


def grid_metadata(grid: OccupancyGrid) -> dict:
    return {
        "resolution": grid.resolution,
        "origin": list(grid.origin),
        "width": grid.width,
        "height": grid.height,
    }
