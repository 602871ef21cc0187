"""Exception hierarchy shared across the navigation stack."""

from __future__ import annotations


class SemnavError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(SemnavError):
    """Malformed exchange or config document. Carries a locus (field path or line)."""

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{message} (at {locus})" if locus else message)


class IntegrityError(SemnavError):
    """Dangling id reference, duplicate id, or self-loop door."""


class GeometryError(SemnavError):
    """Zero-length segment, non-positive area, or geometry outside bounds."""


class DisconnectedPath(SemnavError):
    """A node/edge sequence whose adjacency does not hold in the graph."""


class UnknownRoom(SemnavError):
    """Room id not present in the model or graph."""


class NoPath(SemnavError):
    """Destination unreachable from the start room."""


class ResolutionTooCoarse(SemnavError):
    """Grid resolution exceeds the thinnest wall; walls could vanish."""


class StartOccupied(SemnavError):
    """A* start point maps to an occupied or out-of-grid cell."""


class GoalOccupied(SemnavError):
    """A* goal point maps to an occupied or out-of-grid cell."""


class NoGridPath(SemnavError):
    """Free space between the two cells is disconnected.

    When raised by stitch(), ``leg`` holds the index of the failing leg.
    """

    def __init__(self, message: str, leg: int | None = None):
        self.leg = leg
        super().__init__(message)


class SnapError(SemnavError):
    """A waypoint has no free cell within the snap radius."""

    def __init__(self, message: str, waypoint: int | None = None):
        self.waypoint = waypoint
        super().__init__(message)
