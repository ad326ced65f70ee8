"""
Gaussian atom-cavity and atom-laser coupling profiles along the
transit axis z. Only longitudinal position enters; transverse offsets
are zero.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple, Union

import numpy as np

from ..core.errors import ConfigurationError, DomainError
from ..core.params import Kinematics, PhysicalParams

TimeLike = Union[float, np.ndarray]


class CouplingKind(Enum):
    CAVITY = "cavity"
    LASER_GAUSSIAN = "laser-gaussian"
    LASER_CONSTANT = "laser-constant"


@dataclass(frozen=True)
class CouplingTrack:
    """Coupling seen by one atom moving at the common velocity."""
    atom_index: int
    z0: float
    kind: CouplingKind

    def __post_init__(self):
        if self.atom_index not in (1, 2):
            raise DomainError(f"atom_index must be 1 or 2, got {self.atom_index}")

    def position(self, k: Kinematics, t: TimeLike) -> TimeLike:
        return self.z0 + k.speed * np.asarray(t, dtype=float)


def _gaussian(z: np.ndarray, waist: float, cutoff: float) -> np.ndarray:
    profile = np.exp(-(z / waist) ** 2)
    return np.where(np.abs(z) > cutoff, 0.0, profile)


def _scalar_or_array(value: np.ndarray, t: TimeLike):
    return float(value) if np.ndim(t) == 0 else value


def g_of_t(track: CouplingTrack, p: PhysicalParams, k: Kinematics, t: TimeLike) -> TimeLike:
    """g0·exp(−(z0 + υt)²/w²), exactly zero beyond window_sigma·w."""
    if track.kind is not CouplingKind.CAVITY:
        raise ValueError(f"Unsupported track kind for cavity coupling: {track.kind.value}")
    z = track.position(k, t)
    return _scalar_or_array(p.g0 * _gaussian(z, p.w, k.window_sigma * p.w), t)


def omega_of_t(track: CouplingTrack, p: PhysicalParams, k: Kinematics, t: TimeLike) -> TimeLike:
    """Atom-laser coupling: Omega0 everywhere, or a Gaussian of waist w_tilde."""
    if track.kind is CouplingKind.LASER_CONSTANT:
        return _scalar_or_array(np.full(np.shape(t), p.Omega0, dtype=float), t)
    if track.kind is not CouplingKind.LASER_GAUSSIAN:
        raise ValueError(f"Unsupported track kind for laser coupling: {track.kind.value}")
    if p.w_tilde is None:
        raise ConfigurationError("gaussian laser profile requires 'w_tilde'", key="w_tilde")
    z = track.position(k, t)
    return _scalar_or_array(p.Omega0 * _gaussian(z, p.w_tilde, k.window_sigma * p.w_tilde), t)


@dataclass(frozen=True)
class CouplingSet:
    """The four tracks entering the transit equations."""
    cavity_1: CouplingTrack
    cavity_2: CouplingTrack
    laser_1: CouplingTrack
    laser_2: CouplingTrack

    def evaluate(self, p: PhysicalParams, k: Kinematics, t: TimeLike) -> Tuple[TimeLike, TimeLike, TimeLike, TimeLike]:
        """Return (g1, g2, Ω1, Ω2) at time(s) t."""
        return (
            g_of_t(self.cavity_1, p, k, t),
            g_of_t(self.cavity_2, p, k, t),
            omega_of_t(self.laser_1, p, k, t),
            omega_of_t(self.laser_2, p, k, t),
        )


def coupling_set(p: PhysicalParams, k: Kinematics) -> CouplingSet:
    """Build the cavity and laser tracks of both atoms (z1° − z2° = ell)."""
    z1, z2 = k.initial_positions(p.w)
    laser_kind = CouplingKind.LASER_CONSTANT if p.is_constant_laser else CouplingKind.LASER_GAUSSIAN
    return CouplingSet(
        cavity_1=CouplingTrack(1, z1, CouplingKind.CAVITY),
        cavity_2=CouplingTrack(2, z2, CouplingKind.CAVITY),
        laser_1=CouplingTrack(1, z1, laser_kind),
        laser_2=CouplingTrack(2, z2, laser_kind),
    )


def _gaussian_scalar(z: float, waist: float, cutoff: float) -> float:
    return 0.0 if abs(z) > cutoff else math.exp(-(z / waist) ** 2)


def coupling_product(p: PhysicalParams, k: Kinematics) -> Callable[[float], float]:
    """Scalar t ↦ g1·g2·Ω1·Ω2 with the same profiles and cutoffs as ``CouplingSet``.

    Adaptive quadrature calls this a few hundred times per point, so it
    stays on floats.
    """
    if not p.is_constant_laser and p.w_tilde is None:
        raise ConfigurationError("gaussian laser profile requires 'w_tilde'", key="w_tilde")
    z1, z2 = k.initial_positions(p.w)
    speed = k.speed
    cavity_cut = k.window_sigma * p.w
    peak = p.g0 ** 2 * p.Omega0 ** 2

    if p.is_constant_laser:
        def product(t: float) -> float:
            a, b = z1 + speed * t, z2 + speed * t
            return peak * _gaussian_scalar(a, p.w, cavity_cut) * _gaussian_scalar(b, p.w, cavity_cut)
        return product

    laser_cut = k.window_sigma * p.w_tilde

    def product(t: float) -> float:
        a, b = z1 + speed * t, z2 + speed * t
        cavity = _gaussian_scalar(a, p.w, cavity_cut) * _gaussian_scalar(b, p.w, cavity_cut)
        if cavity == 0.0:
            return 0.0
        laser = _gaussian_scalar(a, p.w_tilde, laser_cut) * _gaussian_scalar(b, p.w_tilde, laser_cut)
        return peak * cavity * laser
    return product
