"""
Adiabatically eliminated two-state model of the transit.

With C2, C3 and C4 eliminated, the amplitudes of |a,1̄;0⟩ and |1,ā;0⟩ obey

    i·ċ1 = −Ω2²/(4Δ)·c1 + λ·c5
    i·ċ5 = λ·c1 − Ω1²/(4Δ)·c5,        λ(t) = Ω1·Ω2·g1·g2 / (4·δ·Δ²)

and, for a constant laser, the accumulated angle ξ(+∞) has the closed form
θ(υ, ℓ) = √(π/32)·Ω²·g0²·w / (δ·Δ²·υ) · exp(−ℓ²/2w²).
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp

from ..core.errors import ConfigurationError, DomainError, QuadratureError, StiffnessError
from ..core.log import get_logger
from ..core.params import Kinematics, PhysicalParams, SolverSettings
from ..physics.couplings import CouplingSet, TimeLike, coupling_product, coupling_set

logger = get_logger(__name__)

SQRT_PI_OVER_32 = math.sqrt(math.pi / 32.0)

# half-width, in waists, of the midpoint range xi_quadrature integrates over
QUADRATURE_CORE = 5.0


class AngleProvenance(Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    FULL_MODEL = "full-model"
    REDUCED_MODEL = "reduced-model"


@dataclass
class EffectiveAngle:
    """Coupling angle together with how it was obtained."""
    theta: float
    provenance: AngleProvenance
    abserr: Optional[float] = None


@dataclass
class TwoQubitOperator:
    """4×4 operator on (|0,0̄⟩, |0,1̄⟩, |1,0̄⟩, |1,1̄⟩) plus per-column leakage."""
    matrix: np.ndarray
    column_leakage: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        self.column_leakage = np.asarray(self.column_leakage, dtype=float)
        if self.matrix.shape != (4, 4):
            raise DomainError(f"two-qubit operator must be 4×4, got {self.matrix.shape}")

    @property
    def leakage_norm(self) -> float:
        return float(self.column_leakage.sum())

    def is_unitary(self, atol: float = 1e-12) -> bool:
        identity = np.eye(4)
        return bool(np.allclose(self.matrix.conj().T @ self.matrix, identity, atol=atol)) and self.leakage_norm <= atol


def _lambda(couplings: CouplingSet, p: PhysicalParams, k: Kinematics, t: TimeLike) -> TimeLike:
    g1, g2, omega1, omega2 = couplings.evaluate(p, k, t)
    return omega1 * omega2 * g1 * g2 / (4.0 * p.delta * p.Delta ** 2)


def lambda_of_t(p: PhysicalParams, k: Kinematics, t: TimeLike) -> TimeLike:
    """Effective exchange rate λ(t) in rad/µs; its sign follows δ."""
    return _lambda(coupling_set(p, k), p, k, t)


def xi_quadrature(p: PhysicalParams, k: Kinematics, t_end: float = math.inf) -> float:
    """ξ(t_end) = ∫ λ(s) ds from the window start.

    ``t_end = inf`` stops at the window edge, beyond which every coupling is
    exactly zero. g1·g2 ∝ exp(−2s²/w²) in the pair's midpoint coordinate s,
    so only |s| ≤ QUADRATURE_CORE·w is integrated; the rest lies below
    e^{−50} of the peak.
    """
    t_start, t_stop = k.window(p.w)
    t_cross = k.crossing_time(p.w)
    core = QUADRATURE_CORE * p.w / k.speed
    lower = max(t_start, t_cross - core)
    upper = min(t_end, t_stop, t_cross + core)
    if upper <= lower:
        return 0.0

    product = coupling_product(p, k)
    scale = 1.0 / (4.0 * p.delta * p.Delta ** 2)
    points = [t_cross] if lower < t_cross < upper else None

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(
            lambda s: scale * product(s),
            lower, upper,
            points=points,
            epsabs=1e-13,
            epsrel=1e-12,
            limit=400,
        )
    trouble = [w for w in caught if issubclass(w.category, IntegrationWarning)]
    if trouble or abserr > 1e-10:
        message = str(trouble[0].message) if trouble else "absolute error above 1e-10"
        raise QuadratureError(f"xi quadrature did not converge: {message}", value, abserr)

    logger.debug("xi_quadrature", t_end=upper, value=value, abserr=abserr)
    return float(value)


def theta_reduced(v_over_K, ell_over_w):
    """θ in reduced units: √(π/32)·exp(−(ℓ/w)²/2) / (υ/K); broadcasts."""
    v_over_K = np.asarray(v_over_K, dtype=float)
    ell_over_w = np.asarray(ell_over_w, dtype=float)
    if np.any(v_over_K <= 0):
        raise DomainError("velocity must be positive to define the coupling angle")
    theta = SQRT_PI_OVER_32 * np.exp(-0.5 * ell_over_w ** 2) / v_over_K
    return float(theta) if theta.ndim == 0 else theta


def theta_closed_form(p: PhysicalParams, k: Kinematics) -> float:
    """Asymptotic coupling angle θ(υ, ℓ) of a constant laser."""
    if not p.is_constant_laser:
        raise ConfigurationError(
            "closed-form angle needs a constant laser; use xi_quadrature for gaussian profiles",
            key="laser_profile",
        )
    if k.speed <= 0:
        raise DomainError(f"velocity must be positive, got {k.v}")
    K = p.Omega0 ** 2 * p.g0 ** 2 * p.w / (p.delta * p.Delta ** 2)
    return SQRT_PI_OVER_32 * K / k.speed * math.exp(-0.5 * (k.ell / p.w) ** 2)


def evolution_matrix(theta: float) -> TwoQubitOperator:
    """Identity on |0,0̄⟩ and |1,1̄⟩, rotation [[cos θ, −i sin θ], [−i sin θ, cos θ]] in between."""
    if not math.isfinite(theta):
        raise DomainError(f"coupling angle must be finite, got {theta}")
    c, s = math.cos(theta), math.sin(theta)
    matrix = np.eye(4, dtype=complex)
    matrix[1:3, 1:3] = [[c, -1j * s], [-1j * s, c]]
    return TwoQubitOperator(matrix)


def exchange_angle_series(initial: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Continuously tracked ξ(t) from the amplitudes of the two exchanged states.

    For c_init = e^{iφ}·cos ξ and c_other = −i·e^{iφ}·sin ξ the product
    (c_init − c_other)·conj(c_init + c_other) has phase 2ξ; unwrapping across
    samples keeps multiples of π, and the common phase φ drops out.
    """
    phase = np.unwrap(np.angle((initial - other) * np.conj(initial + other)))
    return 0.5 * (phase - phase[0])


@dataclass
class ReducedTrajectory:
    """Samples of (c1, c5) from the two-state model."""
    times: np.ndarray
    amplitudes: np.ndarray
    differential_phase: float
    include_cavity_shifts: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.amplitudes[-1]

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def angle(self) -> EffectiveAngle:
        start = np.abs(self.amplitudes[0]) ** 2
        a, b = (0, 1) if start[0] >= start[1] else (1, 0)
        series = exchange_angle_series(self.amplitudes[:, a], self.amplitudes[:, b])
        return EffectiveAngle(float(series[-1]), AngleProvenance.REDUCED_MODEL)


def _reduced_generator(couplings, p, k, t, include_cavity_shifts: bool) -> Tuple[np.ndarray, float]:
    g1, g2, omega1, omega2 = couplings.evaluate(p, k, t)
    lam = omega1 * omega2 * g1 * g2 / (4.0 * p.delta * p.Delta ** 2)
    d1 = -omega2 ** 2 / (4.0 * p.Delta)
    d5 = -omega1 ** 2 / (4.0 * p.Delta)
    if include_cavity_shifts:
        d1 += omega2 ** 2 * g2 ** 2 / (4.0 * p.delta * p.Delta ** 2)
        d5 += omega1 ** 2 * g1 ** 2 / (4.0 * p.delta * p.Delta ** 2)
    mean = 0.5 * (d1 + d5)
    return np.array([[d1 - mean, lam], [lam, d5 - mean]]), d1 - d5


def integrate_reduced(
    p: PhysicalParams,
    k: Kinematics,
    initial: Tuple[complex, complex] = (1.0, 0.0),
    include_cavity_shifts: bool = False,
    settings: Optional[SolverSettings] = None,
) -> ReducedTrajectory:
    """Integrate the two-state model over the transit window.

    The common Stark phase is removed; the differential phase ∫(d1 − d5) dt
    it leaves behind is reported, and vanishes for a constant laser.
    """
    settings = settings or SolverSettings()
    y0 = np.asarray(initial, dtype=complex)
    if y0.shape != (2,) or abs(np.vdot(y0, y0).real - 1.0) > 1e-9:
        raise DomainError("reduced initial state must be two normalised amplitudes")

    couplings = coupling_set(p, k)
    t0, t1 = k.window(p.w)
    t_cross = k.crossing_time(p.w)

    def fun(t, y):
        generator, _ = _reduced_generator(couplings, p, k, t, include_cavity_shifts)
        return -1j * (generator @ y)

    sol = solve_ivp(
        fun, (t0, t1), y0,
        method="DOP853",
        t_eval=np.linspace(t0, t1, settings.samples),
        rtol=min(settings.rtol, 1e-10),
        atol=settings.atol,
        max_step=0.25 * p.w / k.speed,
    )
    if sol.status < 0:
        failed_at = float(sol.t[-1]) if len(sol.t) else t0
        raise StiffnessError(f"reduced integration failed: {sol.message}", failed_at)

    differential, _ = quad(
        lambda s: _reduced_generator(couplings, p, k, s, include_cavity_shifts)[1],
        t0, t1,
        points=[t_cross] if t0 < t_cross < t1 else None,
        limit=400,
    )
    if not p.is_constant_laser:
        logger.info("differential_stark_phase", phase=differential)

    return ReducedTrajectory(sol.t, sol.y.T, float(differential), include_cavity_shifts)
