"""
map: closed-form angle, entropy or gate-fidelity grids over (υ/K, ℓ/w).
"""

from pathlib import Path

from utils.analysis.atlas import fidelity_map, theta_map
from utils.analysis.entanglement import entropy_map
from utils.analysis.grid import ReducedGrid, parse_grid_spec, parse_range
from utils.core.errors import ConfigurationError, DomainError
from utils.core.log import get_logger
from utils.core.params import derive_scales
from utils.engines.gate_lab import diagram_summary
from utils.export_service import grid_in_units, save_grid

from .common import csv_header, load_run_config, start_manifest

logger = get_logger(__name__)

MAP_KINDS = ["entropy", "theta", "fidelity:i-swap", "fidelity:cz", "fidelity:cnotbar"]


def _compute(kind: str, grid: ReducedGrid, threads: int):
    if kind == "entropy":
        return entropy_map(grid, threads)
    if kind == "theta":
        return theta_map(grid, threads)
    if kind.startswith("fidelity:"):
        return fidelity_map(kind.split(":", 1)[1], grid, threads)
    raise ValueError(f"Unsupported map kind: {kind}")


def _pulse_listing(kind: str) -> str:
    rows = diagram_summary(kind.split(":", 1)[1])
    return " ".join(f"{row['kind']}[{row['targets']}]" for row in rows)


def render_map(args) -> int:
    config = load_run_config(args)
    if not config.params.is_constant_laser:
        raise ConfigurationError("maps use the closed-form angle and need a constant laser", key="laser_profile")

    grid = ReducedGrid.build(
        shape=parse_grid_spec(args.grid),
        v_range=parse_range(args.v_range) if args.v_range else None,
        ell_range=parse_range(args.ell_range),
    )
    frame = _compute(args.kind, grid, args.threads)

    scales = derive_scales(config.params)
    if args.units == "absolute" and scales.velocity_unit == 0:
        raise DomainError("absolute units are undefined with the laser off (Omega0 = 0)")
    frame = grid_in_units(frame, args.units, scales)

    manifest = start_manifest(args, config)
    slug = args.kind.replace(":", "_")
    header = csv_header(
        config,
        kind=args.kind,
        grid=f"{grid.shape[0]}x{grid.shape[1]}",
        units=args.units,
        rows=frame.index.name,
        columns=frame.columns.name,
    )
    if args.kind.startswith("fidelity:"):
        header["pulses"] = _pulse_listing(args.kind)
    path = save_grid(frame, Path(args.out) / f"{slug}_map.csv", header)
    manifest.add_output(path)
    manifest.save()

    print(f"{args.kind} map {grid.shape[0]}x{grid.shape[1]} written to {path}")
    logger.info("map_written", kind=args.kind, shape=grid.shape, minimum=float(frame.values.min()),
                maximum=float(frame.values.max()))
    return 0
