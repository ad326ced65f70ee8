"""
lines: condition curves θ(υ, ℓ) = θ*, one CSV per branch n.
"""

from pathlib import Path

from utils.analysis.atlas import ConditionQuery, TargetKind, condition_curve
from utils.analysis.grid import parse_range
from utils.core.log import get_logger
from utils.export_service import save_csv

from .common import csv_header, load_run_config, parse_n_list, start_manifest

logger = get_logger(__name__)


def render_lines(args) -> int:
    config = load_run_config(args)
    kind = TargetKind(args.target)
    ell_range = parse_range(args.ell_range)
    manifest = start_manifest(args, config)

    for n in parse_n_list(args.n):
        query = ConditionQuery(kind, n=n, ell_range=ell_range, samples=args.samples)
        curve = condition_curve(query, config.params)
        header = csv_header(
            config,
            target=kind.value,
            n=n,
            theta_star=curve.theta_star,
            units="reduced (v/K, ell/w)" + ("; absolute m/s, µm" if args.units == "absolute" else ""),
        )
        path = save_csv(curve.to_frame(absolute=args.units == "absolute"),
                        Path(args.out) / f"{kind.value}_n{n}.csv", header)
        manifest.add_output(path)
        print(f"n={n}: theta*={curve.theta_star:.6f} rad, v/K from {curve.v_over_K[0]:.6f} "
              f"to {curve.v_over_K[-1]:.6f} -> {path}")

    manifest.save()
    return 0
