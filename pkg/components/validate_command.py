"""
validate: derived scales and the dispersive-regime check of a parameter set.
"""

from pathlib import Path

from utils.core.log import get_logger
from utils.core.params import check_adiabaticity, derive_scales
from utils.export_service import render_report

from .common import load_run_config, start_manifest

logger = get_logger(__name__)


def render_validate(args) -> int:
    """Print K, w and the three ratios; exit 3 when a condition fails."""
    config = load_run_config(args, margin=args.margin)
    scales = derive_scales(config.params)
    report = check_adiabaticity(config.params, config.margin)

    text = render_report("validate.txt.j2", source=config.source, scales=scales, report=report)
    print(text, end="")

    manifest = start_manifest(args, config)
    report_path = Path(args.out) / "validate.txt"
    report_path.write_text(text, encoding="utf-8")
    manifest.add_output(report_path)
    manifest.save()

    logger.info("parameters_validated", adiabatic=report.is_adiabatic, ratios=list(report.ratios))
    return 0 if report.is_adiabatic else 3
