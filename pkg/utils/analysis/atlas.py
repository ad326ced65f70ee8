"""
Condition curves and (υ, ℓ)-plane sweeps.

Every angle in this module is linear in 1/υ, because ∫λ dt = (1/υ)·∫λ dz
along the straight transit. Condition curves therefore invert exactly, both
for the closed form and for a gaussian laser integrated by quadrature.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..core.errors import DomainError
from ..core.log import get_logger
from ..core.params import DerivedScales, Kinematics, PhysicalParams, derive_scales
from ..engines.effective_dynamics import SQRT_PI_OVER_32, theta_reduced, xi_quadrature
from ..engines.gate_lab import GateDiagram, gate_fidelity
from .entanglement import entropy_map
from .grid import ReducedGrid, map_rows

logger = get_logger(__name__)

__all__ = [
    "TargetKind", "ConditionQuery", "ConditionCurve", "target_angle", "solve_velocity",
    "solve_velocity_reduced", "condition_curve", "theta_map", "fidelity_map", "entropy_map",
    "ridge_cells",
]


class TargetKind(Enum):
    MAX_ENTANGLEMENT = "max-entanglement"
    ISWAP = "i-swap"
    CZ_CNOT = "cz-cnot"
    CUSTOM = "custom"


def target_angle(kind: TargetKind, n: int = 0, custom: Optional[float] = None) -> float:
    """θ* of branch n: (2n+1)π/4, 3π/2 + 2πn, π + 2πn, or a custom value."""
    if n < 0:
        raise DomainError(f"branch index n must be non-negative, got {n}")
    if kind is TargetKind.MAX_ENTANGLEMENT:
        return (2 * n + 1) * math.pi / 4
    if kind is TargetKind.ISWAP:
        return 1.5 * math.pi + 2 * math.pi * n
    if kind is TargetKind.CZ_CNOT:
        return math.pi + 2 * math.pi * n
    if kind is TargetKind.CUSTOM:
        if custom is None:
            raise DomainError("custom target needs an explicit angle")
        return float(custom)
    raise ValueError(f"Unsupported target kind: {kind}")


@dataclass(frozen=True)
class ConditionQuery:
    target_kind: TargetKind
    n: int = 0
    ell_range: Tuple[float, float] = (0.0, 3.0)
    samples: int = 61
    custom_theta: Optional[float] = None

    def __post_init__(self):
        if self.samples < 2:
            raise DomainError(f"a condition curve needs at least 2 samples, got {self.samples}")
        low, high = self.ell_range
        if low < 0 or high <= low:
            raise DomainError(f"ell range must satisfy 0 ≤ low < high, got {self.ell_range}")

    @property
    def theta_star(self) -> float:
        return target_angle(self.target_kind, self.n, self.custom_theta)


@dataclass
class ConditionCurve:
    """(ℓ/w, υ/K) pairs on which θ(υ, ℓ) = θ*."""
    ell_over_w: np.ndarray
    v_over_K: np.ndarray
    theta_star: float
    n: int
    target_kind: TargetKind = TargetKind.CUSTOM
    scales: Optional[DerivedScales] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.ell_over_w)

    def points(self):
        return list(zip(self.ell_over_w.tolist(), self.v_over_K.tolist()))

    def to_frame(self, absolute: bool = False) -> pd.DataFrame:
        frame = pd.DataFrame({
            "ell_over_w": self.ell_over_w,
            "v_over_K": self.v_over_K,
            "theta_star": self.theta_star,
            "n": self.n,
        })
        if absolute:
            if self.scales is None:
                raise DomainError("absolute units need the derived scales of a parameter set")
            v_abs, ell_abs = self.scales.absolute(self.v_over_K, self.ell_over_w)
            frame.insert(0, "ell_um", ell_abs)
            frame.insert(1, "v_m_per_s", v_abs)
        return frame

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, scales: Optional[DerivedScales] = None) -> "ConditionCurve":
        missing = {"ell_over_w", "v_over_K", "theta_star", "n"} - set(frame.columns)
        if missing:
            raise DomainError(f"curve table lacks columns: {', '.join(sorted(missing))}")
        if frame.empty:
            raise DomainError("curve table has no rows")
        return cls(
            ell_over_w=frame["ell_over_w"].to_numpy(dtype=float),
            v_over_K=frame["v_over_K"].to_numpy(dtype=float),
            theta_star=float(frame["theta_star"].iloc[0]),
            n=int(frame["n"].iloc[0]),
            scales=scales,
        )


def solve_velocity_reduced(theta_star: float, ell_over_w):
    """υ/K with θ(υ, ℓ) = θ* for a constant laser; broadcasts over ℓ/w."""
    if not theta_star > 0:
        raise DomainError(f"target angle must be positive, got {theta_star}")
    ell_over_w = np.asarray(ell_over_w, dtype=float)
    v = SQRT_PI_OVER_32 * np.exp(-0.5 * ell_over_w ** 2) / theta_star
    return float(v) if v.ndim == 0 else v


def solve_velocity(theta_star: float, ell: float, p: PhysicalParams) -> float:
    """Velocity in m/s at which the transit accumulates θ* for spacing ℓ (µm)."""
    if not theta_star > 0:
        raise DomainError(f"target angle must be positive, got {theta_star}")
    scales = derive_scales(p)
    if scales.velocity_unit == 0:
        raise DomainError("the laser is off (Omega0 = 0); no velocity reaches a non-zero angle")
    if p.is_constant_laser:
        return solve_velocity_reduced(theta_star, ell / p.w) * scales.velocity_unit
    # ξ(∞) scales as 1/υ, so one quadrature at a reference speed fixes the curve
    reference = Kinematics(v=1.0, ell=ell)
    return reference.v * xi_quadrature(p, reference) / theta_star


def condition_curve(q: ConditionQuery, p: Optional[PhysicalParams] = None) -> ConditionCurve:
    """Sample the θ = θ* line across the query's ℓ/w range."""
    ell = np.linspace(q.ell_range[0], q.ell_range[1], q.samples)
    scales = derive_scales(p) if p is not None else None
    if p is None or p.is_constant_laser:
        v = solve_velocity_reduced(q.theta_star, ell)
    else:
        v = np.array([solve_velocity(q.theta_star, x * p.w, p) for x in ell]) / scales.velocity_unit
    logger.debug("condition_curve", kind=q.target_kind.value, n=q.n, theta_star=q.theta_star, samples=q.samples)
    return ConditionCurve(ell, np.asarray(v, dtype=float), q.theta_star, q.n, q.target_kind, scales)


def theta_map(grid: ReducedGrid, threads: int = 1) -> pd.DataFrame:
    """Closed-form θ over a reduced grid."""
    return grid.to_frame(map_rows(theta_reduced, grid, threads))


def fidelity_map(name: Union[str, GateDiagram], grid: ReducedGrid, threads: int = 1) -> pd.DataFrame:
    """Gate fidelity over a reduced grid, through the batched pulse sequence."""
    diagram = GateDiagram.parse(name)
    values = map_rows(lambda v, ell: gate_fidelity(diagram, theta_reduced(v, ell)), grid, threads)
    return grid.to_frame(values)


def _local_maxima(column: np.ndarray) -> np.ndarray:
    padded = np.concatenate([[-np.inf], column, [-np.inf]])
    return np.flatnonzero((padded[1:-1] >= padded[:-2]) & (padded[1:-1] >= padded[2:]))


def ridge_cells(frame: pd.DataFrame, curve: ConditionCurve) -> pd.DataFrame:
    """Per ℓ/w column, the local maximum of ``frame`` nearest to the curve.

    ``cell_offset`` counts grid rows between the curve and that maximum.
    """
    v = frame.index.to_numpy(dtype=float)
    ells = frame.columns.to_numpy(dtype=float)
    values = frame.to_numpy()
    rows = []
    for j, ell in enumerate(ells):
        if ell < curve.ell_over_w[0] or ell > curve.ell_over_w[-1]:
            continue
        v_curve = float(np.interp(ell, curve.ell_over_w, curve.v_over_K))
        if v_curve < v.min() or v_curve > v.max():
            continue
        i_curve = int(np.argmin(np.abs(v - v_curve)))
        peaks = _local_maxima(values[:, j])
        i_ridge = int(peaks[np.argmin(np.abs(peaks - i_curve))])
        rows.append({
            "ell_over_w": ell,
            "v_curve": v_curve,
            "v_ridge": v[i_ridge],
            "value": values[i_ridge, j],
            "cell_offset": i_ridge - i_curve,
        })
    return pd.DataFrame(rows, columns=["ell_over_w", "v_curve", "v_ridge", "value", "cell_offset"])
