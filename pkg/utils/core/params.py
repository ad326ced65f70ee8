"""
Physical parameters, kinematics and derived scales of the two-atom
cavity transit.

Unit conventions used throughout the package:
    angular frequencies  rad/µs (quoted "MHz" values are taken as angular)
    lengths              µm
    times                µs
    velocities           m/s, converted with 1 m/s = 1 µm/µs
"""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .errors import DomainError

# 1 m/s expressed in µm/µs
M_PER_S_TO_UM_PER_US = 1.0

DEFAULT_MARGIN = 5.0
DEFAULT_WINDOW_SIGMA = 8.0
MIN_WINDOW_SIGMA = 6.0


class LaserProfile(Enum):
    """Spatial profile of the transverse laser."""
    CONSTANT = "constant"
    GAUSSIAN = "gaussian"


class PropagationMethod(Enum):
    """Integrators available for the five-amplitude system."""
    MAGNUS = "magnus"
    RK45 = "RK45"
    DOP853 = "DOP853"


@dataclass(frozen=True)
class PhysicalParams:
    """Cavity and laser knobs that stay fixed during an experiment."""
    delta: float
    Delta: float
    g0: float
    Omega0: float
    w: float
    w_tilde: Optional[float] = None
    laser_profile: LaserProfile = LaserProfile.CONSTANT

    def __post_init__(self):
        if self.delta == 0:
            raise DomainError("cavity detuning delta must be non-zero")
        if self.Delta == 0:
            raise DomainError("laser detuning Delta must be non-zero")
        if not self.g0 > 0:
            raise DomainError(f"vacuum Rabi frequency g0 must be positive, got {self.g0}")
        # Omega0 = 0 is accepted as the decoupled-laser limit
        if self.Omega0 < 0:
            raise DomainError(f"laser coupling Omega0 must be non-negative, got {self.Omega0}")
        if not self.w > 0:
            raise DomainError(f"cavity waist w must be positive, got {self.w}")
        if self.w_tilde is not None and self.w_tilde < self.w:
            raise DomainError(f"laser waist w_tilde ({self.w_tilde}) must not be smaller than w ({self.w})")

    @property
    def is_constant_laser(self) -> bool:
        return self.laser_profile is LaserProfile.CONSTANT

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["laser_profile"] = self.laser_profile.value
        return data


@dataclass(frozen=True)
class Kinematics:
    """Common velocity and spacing of the atom pair.

    Atom 1 leads: z1° − z2° = ell. When ``z_mid`` is omitted the pair starts
    with atom 1 at −window_sigma·w, i.e. symmetrically far before the waist.
    """
    v: float
    ell: float
    z_mid: Optional[float] = None
    window_sigma: float = DEFAULT_WINDOW_SIGMA

    def __post_init__(self):
        if not self.v > 0:
            raise DomainError(f"velocity v must be positive, got {self.v}")
        if self.ell < 0:
            raise DomainError(f"inter-atomic distance ell must be non-negative, got {self.ell}")
        if self.window_sigma < MIN_WINDOW_SIGMA:
            raise DomainError(f"window_sigma must be at least {MIN_WINDOW_SIGMA}, got {self.window_sigma}")

    @property
    def speed(self) -> float:
        """Velocity in µm/µs."""
        return self.v * M_PER_S_TO_UM_PER_US

    def midpoint(self, w: float) -> float:
        if self.z_mid is not None:
            return self.z_mid
        return -self.window_sigma * w - 0.5 * self.ell

    def initial_positions(self, w: float) -> Tuple[float, float]:
        """Return (z1°, z2°) in µm."""
        z_mid = self.midpoint(w)
        return z_mid + 0.5 * self.ell, z_mid - 0.5 * self.ell

    def window(self, w: float) -> Tuple[float, float]:
        """Integration window: atom 1 entering to atom 2 leaving the ±window_sigma·w support."""
        z1, z2 = self.initial_positions(w)
        edge = self.window_sigma * w
        return (-edge - z1) / self.speed, (edge - z2) / self.speed

    def crossing_time(self, w: float) -> float:
        """Instant at which the pair's midpoint passes the waist."""
        return -self.midpoint(w) / self.speed


@dataclass(frozen=True)
class SolverSettings:
    """Numerical settings of the full-model propagation.

    ``rtol`` and ``atol`` steer the Runge–Kutta methods only; the Magnus
    propagator is controlled by ``step_fraction`` of π over the spectral span.
    """
    method: PropagationMethod = PropagationMethod.MAGNUS
    rtol: float = 1e-9
    atol: float = 1e-12
    norm_tol: float = 1e-8
    step_fraction: float = 1.0
    samples: int = 2001
    leakage_bound: float = 0.1
    dressed_start: bool = True

    def __post_init__(self):
        if not 0 < self.step_fraction <= 1:
            raise DomainError(f"step_fraction must lie in (0, 1], got {self.step_fraction}")
        if self.samples < 2:
            raise DomainError(f"samples must be at least 2, got {self.samples}")
        if self.rtol <= 0 or self.atol <= 0 or self.norm_tol <= 0:
            raise DomainError("solver tolerances must be positive")


@dataclass(frozen=True)
class DerivedScales:
    """Reduced-unit scales: velocities in K, distances in w."""
    velocity_unit: float
    distance_unit: float

    def reduce(self, v: float, ell: float) -> Tuple[float, float]:
        if self.velocity_unit == 0:
            raise DomainError("velocity unit vanishes (Omega0 = 0); reduced units are undefined")
        return v / self.velocity_unit, ell / self.distance_unit

    def absolute(self, v_over_K: float, ell_over_w: float) -> Tuple[float, float]:
        return v_over_K * self.velocity_unit, ell_over_w * self.distance_unit


@dataclass
class AdiabaticCondition:
    """One inequality of the dispersive regime."""
    name: str
    ratio: float
    passed: bool


@dataclass
class AdiabaticityReport:
    """Outcome of checking the large-detuning conditions at peak couplings."""
    margin: float
    conditions: List[AdiabaticCondition] = field(default_factory=list)

    @property
    def ratios(self) -> Tuple[float, ...]:
        return tuple(c.ratio for c in self.conditions)

    @property
    def is_adiabatic(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.conditions if not c.passed]


def derive_scales(p: PhysicalParams) -> DerivedScales:
    """K = Ω0²·g0²·w / (δ·Δ²) in m/s, and the waist w as distance unit."""
    if p.delta == 0 or p.Delta == 0:
        raise DomainError("zero detuning leaves the velocity unit undefined")
    k_um_per_us = p.Omega0 ** 2 * p.g0 ** 2 * p.w / (p.delta * p.Delta ** 2)
    return DerivedScales(
        velocity_unit=k_um_per_us / M_PER_S_TO_UM_PER_US,
        distance_unit=p.w,
    )


def _ratio(numerator: float, denominator: float) -> float:
    return math.inf if denominator == 0 else numerator / denominator


def check_adiabaticity(p: PhysicalParams, margin: float = DEFAULT_MARGIN) -> AdiabaticityReport:
    """Compare |δ|/g0, |Δ|/Ω0 and |δΔ|/g0² against ``margin``.

    |g_µ(t)| ≤ g0 and |Ω_µ(t)| ≤ Ω0, so peak values bound every instant.
    """
    if margin < 1:
        raise DomainError(f"adiabaticity margin must be at least 1, got {margin}")

    ratios = [
        ("cavity_detuning", _ratio(abs(p.delta), p.g0)),
        ("laser_detuning", _ratio(abs(p.Delta), p.Omega0)),
        ("two_photon", _ratio(abs(p.delta * p.Delta), p.g0 ** 2)),
    ]
    return AdiabaticityReport(
        margin=margin,
        conditions=[AdiabaticCondition(name, r, r >= margin) for name, r in ratios],
    )
