"""
crosscheck: re-simulate a condition curve with the full five-state model.
"""

from pathlib import Path

import numpy as np

from utils.analysis.atlas import ConditionCurve
from utils.core.errors import VerificationError
from utils.core.log import get_logger
from utils.core.params import derive_scales
from utils.export_service import read_csv, render_report, save_csv
from utils.validation.crosscheck import verify_curve_full_model

from .common import csv_header, load_run_config, start_manifest

logger = get_logger(__name__)


def _subsample(curve: ConditionCurve, points: int) -> ConditionCurve:
    if points is None or points >= len(curve):
        return curve
    index = np.unique(np.linspace(0, len(curve) - 1, max(points, 1)).round().astype(int))
    return ConditionCurve(curve.ell_over_w[index], curve.v_over_K[index], curve.theta_star, curve.n,
                          curve.target_kind, curve.scales)


def render_crosscheck(args) -> int:
    config = load_run_config(args)
    curve_path = Path(args.curve)
    if not curve_path.is_file():
        raise FileNotFoundError(f"curve file not found: {curve_path}")
    curve = ConditionCurve.from_frame(read_csv(curve_path), derive_scales(config.params))
    curve = _subsample(curve, args.points)

    report = verify_curve_full_model(
        curve, config.params,
        tolerance=args.tol,
        settings=config.solver,
        margin=config.margin,
        threads=args.threads,
    )

    manifest = start_manifest(args, config)
    header = csv_header(config, curve=str(curve_path), tolerance=report.tolerance, units="angles in rad")
    manifest.add_output(save_csv(report.to_frame(), Path(args.out) / "crosscheck.csv", header))
    text = render_report("crosscheck.txt.j2", report=report)
    print(text, end="")
    report_path = Path(args.out) / "crosscheck.txt"
    report_path.write_text(text, encoding="utf-8")
    manifest.add_output(report_path)
    manifest.save()

    if not report.passed:
        raise VerificationError(
            f"{report.error_count} findings above tolerance {report.tolerance:.3g} rad "
            f"(max deviation {report.max_deviation:.3g})"
        )
    return 0
