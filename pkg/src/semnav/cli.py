"""Command-line entry points: plan, sim, grid, serve.

Exit codes: 0 success, 1 unexpected failure, 2 no path, 3 validation or
schema error. Diagnostics go to stderr; the plan verb prints the room-name
sequence to stdout.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from . import sim as simmod
from .errors import (
    GeometryError,
    IntegrityError,
    NoGridPath,
    NoPath,
    ResolutionTooCoarse,
    SchemaError,
    SemnavError,
    SnapError,
    UnknownRoom,
)
from .grid import DEFAULT_RESOLUTION, grid_metadata, grid_to_pgm, inflate, rasterize
from .hypergraph import WeightConfig, build_hypergraph
from .model import load_model
from .planner import optimal_path
from .sim import MissionScript, SimParams, events_to_ndjson

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NO_PATH = 2
EXIT_INVALID = 3


def _fail(exc: Exception) -> int:
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, (NoPath, NoGridPath)):
        return EXIT_NO_PATH
    if isinstance(exc, (SchemaError, IntegrityError, GeometryError, UnknownRoom,
                        SnapError, ResolutionTooCoarse, ValueError, OSError)):
        return EXIT_INVALID
    return EXIT_FAILURE


def _load_weights(path: str | None) -> WeightConfig:
    if path is None:
        return WeightConfig()
    return WeightConfig.from_json(Path(path).read_bytes())


@click.group()
def main() -> None:
    """Semantic building navigation tools."""


@main.command("plan")
@click.option("--model", "model_path", required=True, type=click.Path(), help="Building exchange file.")
@click.option("--from", "from_room", required=True, help="Start room id.")
@click.option("--to", "to_room", required=True, help="Destination room id.")
@click.option("--weights", "weights_path", default=None, type=click.Path(), help="Weight config JSON.")
@click.option("--out", "out_path", default=None, type=click.Path(), help="Write the path export document here.")
@click.option("--today", "today_str", default=None, help="Date for scan-age evaluation (YYYY-MM-DD).")
def plan_cmd(model_path: str, from_room: str, to_room: str, weights_path: str | None,
             out_path: str | None, today_str: str | None) -> None:
    """Plan an optimal room-to-room path and print the room-name sequence."""
    try:
        model = load_model(model_path)
        config = _load_weights(weights_path)
        today = date.fromisoformat(today_str) if today_str else date.today()
        graph = build_hypergraph(model, config, today)
        path = optimal_path(graph, from_room, to_room, config)
    except SemnavError as exc:
        sys.exit(_fail(exc))
    except OSError as exc:
        sys.exit(_fail(exc))

    for room_id in path.room_ids:
        click.echo(model.room(room_id).name)
    for warning in path.warnings:
        click.echo(f"warning: {warning.kind}: {', '.join(warning.room_ids)}", err=True)
    if out_path:
        Path(out_path).write_text(json.dumps(path.to_dict(), indent=2) + "\n")
    sys.exit(EXIT_OK)


@main.command("sim")
@click.option("--model", "model_path", required=True, type=click.Path(), help="Building exchange file.")
@click.option("--script", "script_path", required=True, type=click.Path(), help="Mission script JSON.")
@click.option("--weights", "weights_path", default=None, type=click.Path(), help="Weight config JSON.")
@click.option("--out", "out_path", default=None, type=click.Path(), help="Write the event log (NDJSON) here.")
def sim_cmd(model_path: str, script_path: str, weights_path: str | None, out_path: str | None) -> None:
    """Run a headless mission; exit 0 iff the goal was reached."""
    try:
        model = load_model(model_path)
        config = _load_weights(weights_path)
        script = MissionScript.from_json(Path(script_path).read_bytes())
        mission = simmod.run_script(model, script, config=config)
    except SemnavError as exc:
        sys.exit(_fail(exc))
    except OSError as exc:
        sys.exit(_fail(exc))

    log = events_to_ndjson(mission.events)
    if out_path:
        Path(out_path).write_text(log)
    else:
        click.echo(log, nl=False)
    reached = any(e.kind == "goal-reached" for e in mission.events)
    if reached:
        sys.exit(EXIT_OK)
    aborted_no_path = any(e.kind == "aborted" and "no path" in e.payload.get("reason", "") for e in mission.events)
    click.echo("mission did not reach the goal", err=True)
    sys.exit(EXIT_NO_PATH if aborted_no_path else EXIT_FAILURE)


@main.command("grid")
@click.option("--model", "model_path", required=True, type=click.Path(), help="Building exchange file.")
@click.option("--resolution", default=DEFAULT_RESOLUTION, show_default=True, help="Cell size in meters.")
@click.option("--inflate", "inflate_radius", default=0.0, show_default=True, help="Inflation radius in meters.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="PGM output path (metadata sidecar: .json).")
def grid_cmd(model_path: str, resolution: float, inflate_radius: float, out_path: str) -> None:
    """Rasterize wall geometry to a portable graymap plus metadata sidecar."""
    try:
        model = load_model(model_path)
        grid = rasterize(model, resolution)
        if inflate_radius > 0:
            grid = inflate(grid, inflate_radius)
    except SemnavError as exc:
        sys.exit(_fail(exc))
    except OSError as exc:
        sys.exit(_fail(exc))
    out = Path(out_path)
    out.write_bytes(grid_to_pgm(grid))
    out.with_suffix(".json").write_text(json.dumps(grid_metadata(grid), indent=2) + "\n")
    click.echo(f"wrote {out} ({grid.width}x{grid.height} cells)")
    sys.exit(EXIT_OK)


@main.command("serve")
@click.option("--model", "model_path", required=True, type=click.Path(), help="Building exchange file.")
@click.option("--port", default=8080, show_default=True, help="HTTP port.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--weights", "weights_path", default=None, type=click.Path(), help="Weight config JSON.")
@click.option("--resolution", default=DEFAULT_RESOLUTION, show_default=True, help="Grid cell size in meters.")
@click.option("--start", "start_room", default=None, help="Initial robot room (default: first room id).")
@click.option("--rate", default=1.0, show_default=True, help="Simulation speed multiplier.")
@click.option("--ui", "ui_dir", default=None, type=click.Path(), help="Directory with the built operator console.")
def serve_cmd(model_path: str, port: int, host: str, weights_path: str | None,
              resolution: float, start_room: str | None, rate: float, ui_dir: str | None) -> None:
    """Serve the API (and optionally the operator console) for one building."""
    import uvicorn

    from .service import create_app

    try:
        model = load_model(model_path)
        config = _load_weights(weights_path)
        params = SimParams(resolution=resolution)
        if ui_dir is None:
            bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
            ui_dir = str(bundled) if bundled.is_dir() else None
        app = create_app(model, config=config, params=params, start_room=start_room, rate=rate, ui_dir=ui_dir)
    except SemnavError as exc:
        sys.exit(_fail(exc))
    except OSError as exc:
        sys.exit(_fail(exc))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
