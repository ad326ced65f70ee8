"""
Cross-validation of condition curves against the full five-state model.

Each curve point is re-simulated with the full dynamics; the tracked exit
angle is compared with the reduced two-state model (cavity shifts kept), and
its deviation from the curve's target θ* is reported alongside.
"""

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..analysis.atlas import ConditionCurve
from ..core.errors import CavityLabError, NonAdiabaticWarning
from ..core.log import get_logger
from ..core.params import (
    DEFAULT_MARGIN,
    AdiabaticityReport,
    Kinematics,
    PhysicalParams,
    SolverSettings,
    check_adiabaticity,
    derive_scales,
)
from ..engines.effective_dynamics import integrate_reduced
from ..engines.full_dynamics import FullState, InitialState, extract_full_angle, integrate

logger = get_logger(__name__)

BASE_TOLERANCE = 0.05
# largest accepted |P_exchanged − sin²θ| at the exit
POPULATION_TOLERANCE = 0.05


class CheckSeverity(Enum):
    ERROR = "error"
    WARNING = "warning"
    INFORMATION = "information"


@dataclass
class CheckFinding:
    """One observation made while checking a curve."""
    severity: CheckSeverity
    message: str
    location: str
    rule_id: str


@dataclass
class PointCheck:
    """Full-model outcome at one (ℓ/w, υ/K) point."""
    ell_over_w: float
    v_over_K: float
    theta_star: float
    theta_full: float = math.nan
    theta_reference: float = math.nan
    folded: float = math.nan
    leakage: float = math.nan
    norm_drift: float = math.nan
    p_initial: float = math.nan
    p_exchanged: float = math.nan
    wall_time_s: float = 0.0
    error: Optional[str] = None

    @property
    def deviation(self) -> float:
        """θ_full minus the reduced-model angle."""
        return self.theta_full - self.theta_reference

    @property
    def closed_form_deviation(self) -> float:
        return self.theta_full - self.theta_star

    @property
    def population_error(self) -> float:
        expected = math.sin(self.theta_reference) ** 2
        return abs(self.p_exchanged - expected)

    @property
    def location(self) -> str:
        return f"ell/w={self.ell_over_w:.4g}, v/K={self.v_over_K:.6g}"


@dataclass
class CrosscheckReport:
    """Verification report of one condition curve."""
    theta_star: float
    n: int
    tolerance: float
    adiabaticity: AdiabaticityReport
    points: List[PointCheck] = field(default_factory=list)
    findings: List[CheckFinding] = field(default_factory=list)
    performance_metrics: Dict[str, float] = field(default_factory=dict)
    timestamp: float = 0

    def __post_init__(self):
        if self.timestamp == 0:
            self.timestamp = time.time()

    @property
    def error_count(self) -> int:
        return len([f for f in self.findings if f.severity == CheckSeverity.ERROR])

    @property
    def warning_count(self) -> int:
        return len([f for f in self.findings if f.severity == CheckSeverity.WARNING])

    @property
    def passed(self) -> bool:
        return self.error_count == 0

    @property
    def max_deviation(self) -> float:
        deviations = [abs(p.deviation) for p in self.points if p.error is None]
        return max(deviations) if deviations else math.nan

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                "ell_over_w": p.ell_over_w,
                "v_over_K": p.v_over_K,
                "theta_star": p.theta_star,
                "theta_reference": p.theta_reference,
                "theta_full": p.theta_full,
                "deviation": p.deviation,
                "closed_form_deviation": p.closed_form_deviation,
                "p_initial": p.p_initial,
                "p_exchanged": p.p_exchanged,
                "population_error": p.population_error,
                "leakage": p.leakage,
                "norm_drift": p.norm_drift,
            }
            for p in self.points
        ])


def default_tolerance(theta_star: float) -> float:
    """0.05 rad on the first branch, growing in proportion to θ* beyond π/4."""
    return BASE_TOLERANCE * max(1.0, theta_star / (math.pi / 4))


def _check_point(
    ell_over_w: float,
    v_over_K: float,
    theta_star: float,
    p: PhysicalParams,
    settings: SolverSettings,
) -> PointCheck:
    scales = derive_scales(p)
    v, ell = scales.absolute(v_over_K, ell_over_w)
    check = PointCheck(ell_over_w, v_over_K, theta_star)
    started = time.perf_counter()
    try:
        k = Kinematics(v=v, ell=ell)
        reduced = integrate_reduced(p, k, include_cavity_shifts=True, settings=settings)
        check.theta_reference = reduced.angle().theta

        trajectory = integrate(FullState.basis(InitialState.A_ONE), p, k, settings)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonAdiabaticWarning)
            angle = extract_full_angle(trajectory, settings.leakage_bound)
        final = trajectory.final.populations
        check.theta_full = angle.theta
        check.folded = angle.folded
        check.leakage = angle.leakage
        check.norm_drift = trajectory.stats.max_norm_drift
        check.p_initial = float(final[0])
        check.p_exchanged = float(final[4])
    except CavityLabError as e:
        check.error = str(e)
    check.wall_time_s = time.perf_counter() - started
    return check


def verify_curve_full_model(
    curve: ConditionCurve,
    p: PhysicalParams,
    tolerance: Optional[float] = None,
    settings: Optional[SolverSettings] = None,
    margin: float = DEFAULT_MARGIN,
    threads: int = 1,
) -> CrosscheckReport:
    """Re-simulate every curve point and grade it against ``tolerance`` (rad)."""
    settings = settings or SolverSettings()
    tolerance = default_tolerance(curve.theta_star) if tolerance is None else tolerance
    adiabaticity = check_adiabaticity(p, margin)
    report = CrosscheckReport(curve.theta_star, curve.n, tolerance, adiabaticity)

    if not adiabaticity.is_adiabatic:
        report.findings.append(CheckFinding(
            CheckSeverity.ERROR,
            f"dispersive conditions fail at margin {margin}: {', '.join(adiabaticity.failed)}",
            "parameters",
            "adiabaticity",
        ))

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        report.points = list(executor.map(
            lambda point: _check_point(point[0], point[1], curve.theta_star, p, settings),
            curve.points(),
        ))
    report.performance_metrics["wall_time_s"] = time.perf_counter() - started
    report.performance_metrics["points"] = float(len(report.points))

    for point in report.points:
        if point.error is not None:
            report.findings.append(CheckFinding(CheckSeverity.ERROR, point.error, point.location, "integration"))
            continue
        if point.leakage > settings.leakage_bound:
            report.findings.append(CheckFinding(
                CheckSeverity.WARNING,
                f"intermediate-state population {point.leakage:.3g} after the transit",
                point.location,
                "leakage",
            ))
        if not abs(point.deviation) <= tolerance:
            report.findings.append(CheckFinding(
                CheckSeverity.ERROR,
                f"full-model angle {point.theta_full:.6g} deviates by {point.deviation:+.3g} rad "
                f"from the reduced model ({point.theta_reference:.6g})",
                point.location,
                "angle",
            ))
        if not point.population_error <= POPULATION_TOLERANCE:
            report.findings.append(CheckFinding(
                CheckSeverity.ERROR,
                f"exchanged population {point.p_exchanged:.4g} differs by {point.population_error:.3g} "
                f"from sin²θ of the reduced model",
                point.location,
                "population",
            ))
        if np.isfinite(point.norm_drift) and point.norm_drift > 10 * settings.norm_tol:
            report.findings.append(CheckFinding(
                CheckSeverity.WARNING,
                f"norm drift {point.norm_drift:.3g}",
                point.location,
                "norm",
            ))

    logger.info(
        "curve_crosschecked",
        theta_star=curve.theta_star, n=curve.n, points=len(report.points),
        errors=report.error_count, warnings=report.warning_count,
        max_deviation=report.max_deviation,
    )
    return report
