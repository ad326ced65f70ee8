"""
trajectory: one full-model transit, written as CSV plus a summary.
"""

from pathlib import Path

from utils.core.log import get_logger
from utils.engines.effective_dynamics import theta_closed_form
from utils.engines.full_dynamics import FullState, InitialState, extract_full_angle, integrate
from utils.export_service import render_report, save_csv

from .common import csv_header, load_run_config, start_manifest

logger = get_logger(__name__)


def render_trajectory(args) -> int:
    config = load_run_config(args, v=args.v, ell=args.ell, method=args.method, samples=args.samples)
    p, k, solver = config.params, config.require_kinematics(), config.solver
    initial = InitialState(args.initial)

    trajectory = integrate(FullState.basis(initial), p, k, solver)
    angle = extract_full_angle(trajectory, solver.leakage_bound)
    theta_closed = theta_closed_form(p, k) if p.is_constant_laser else None

    manifest = start_manifest(args, config)
    header = csv_header(
        config,
        initial=initial.value,
        method=solver.method.value,
        dressed_start=solver.dressed_start,
        units="t_us in µs; amplitudes dimensionless",
    )
    csv_path = save_csv(trajectory.to_frame(), Path(args.out) / f"trajectory_{initial.value}.csv", header)
    manifest.add_output(csv_path)

    t_start, t_end = k.window(p.w)
    text = render_report(
        "trajectory.txt.j2",
        initial=initial.value,
        stats=trajectory.stats,
        v=k.v,
        ell=k.ell,
        t_start=t_start,
        t_end=t_end,
        samples=len(trajectory),
        populations=list(zip(["C1", "C2", "C3", "C4", "C5"], trajectory.final.populations.tolist())),
        angle=angle,
        theta_closed=theta_closed,
    )
    print(text, end="")
    summary_path = Path(args.out) / f"trajectory_{initial.value}.txt"
    summary_path.write_text(text, encoding="utf-8")
    manifest.add_output(summary_path)
    manifest.save()

    logger.info("trajectory_summary", initial=initial.value, theta_full=angle.theta, leakage=angle.leakage)
    return 0
