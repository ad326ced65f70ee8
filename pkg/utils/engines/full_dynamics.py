"""
Full restricted dynamics of the two atoms, the cavity mode and the laser.

The composite wave function is restricted to the five states

    C1 |a,1̄;0⟩   C2 |a,ē;0⟩   C3 |a,ā;1⟩   C4 |e,ā;0⟩   C5 |1,ā;0⟩

which are closed under the interaction-picture Hamiltonian when the pair
starts in |a,1̄;0⟩ or |1,ā;0⟩:

    i·Ċ1 = ½Ω2·C2
    i·Ċ2 = Δ·C2 + g2·C3 + ½Ω2·C1
    i·Ċ3 = −δ·C3 + g1·C4 + g2·C2
    i·Ċ4 = Δ·C4 + g1·C3 + ½Ω1·C5
    i·Ċ5 = ½Ω1·C4
"""

import math
import time
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from ..core.errors import DomainError, NonAdiabaticWarning, StiffnessError
from ..core.log import get_logger
from ..core.params import Kinematics, PhysicalParams, PropagationMethod, SolverSettings
from ..physics.couplings import CouplingSet, coupling_set
from .effective_dynamics import exchange_angle_series

logger = get_logger(__name__)

INTERMEDIATE = (1, 2, 3)

# steps diagonalised per batch in the exponential propagator
_BATCH_STEPS = 65536

# largest advance of the tracked phase 2ξ between internal samples
TRACK_PHASE_STEP = math.pi / 8


class InitialState(Enum):
    """Product states that open the five-state subspace."""
    A_ONE = "a1"    # |a,1̄;0⟩, forward exchange sequence
    ONE_A = "1a"    # |1,ā;0⟩, time-reversed sequence

    @property
    def index(self) -> int:
        return 0 if self is InitialState.A_ONE else 4


@dataclass
class FullState:
    """Five complex amplitudes at time t (µs)."""
    amplitudes: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (5,):
            raise DomainError(f"a full state has 5 amplitudes, got shape {self.amplitudes.shape}")

    @classmethod
    def basis(cls, initial: InitialState, t: float = 0.0) -> "FullState":
        amplitudes = np.zeros(5, dtype=complex)
        amplitudes[initial.index] = 1.0
        return cls(amplitudes, t)

    @property
    def c1(self) -> complex:
        return self.amplitudes[0]

    @property
    def c5(self) -> complex:
        return self.amplitudes[4]

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def leakage(self) -> float:
        """Population of the intermediate states C2, C3, C4."""
        return float(self.populations[list(INTERMEDIATE)].sum())


@dataclass
class SolverStats:
    method: str
    steps: int
    rejected_steps: int
    max_norm_drift: float
    wall_time_s: float = 0.0
    function_evaluations: int = 0


@dataclass
class Trajectory:
    """Ordered samples of the five amplitudes."""
    times: np.ndarray
    amplitudes: np.ndarray
    stats: SolverStats
    dressed_start: bool = False
    # ξ(t) at the sample times, unwrapped on the internal grid
    exchange_track: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def final(self) -> FullState:
        return FullState(self.amplitudes[-1], float(self.times[-1]))

    @property
    def initial(self) -> FullState:
        return FullState(self.amplitudes[0], float(self.times[0]))

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return len(self.times)

    def to_frame(self) -> pd.DataFrame:
        """Columns t_us, C1_re, C1_im, …, C5_im, norm."""
        data = {"t_us": self.times}
        for i in range(5):
            data[f"C{i + 1}_re"] = self.amplitudes[:, i].real
            data[f"C{i + 1}_im"] = self.amplitudes[:, i].imag
        data["norm"] = self.norms
        return pd.DataFrame(data)


def coupling_matrix(g1, g2, omega1, omega2, p: PhysicalParams) -> np.ndarray:
    """Real symmetric 5×5 matrix H with i·dC/dt = H·C; broadcasts over coupling arrays."""
    g1, g2, omega1, omega2 = (np.asarray(x, dtype=float) for x in (g1, g2, omega1, omega2))
    shape = np.broadcast(g1, g2, omega1, omega2).shape
    H = np.zeros(shape + (5, 5))
    H[..., 0, 1] = H[..., 1, 0] = 0.5 * omega2
    H[..., 1, 1] = p.Delta
    H[..., 1, 2] = H[..., 2, 1] = g2
    H[..., 2, 2] = -p.delta
    H[..., 2, 3] = H[..., 3, 2] = g1
    H[..., 3, 3] = p.Delta
    H[..., 3, 4] = H[..., 4, 3] = 0.5 * omega1
    return H


def rhs(state: FullState, p: PhysicalParams, k: Kinematics) -> np.ndarray:
    """Time derivative of the five amplitudes at ``state.t``."""
    g1, g2, omega1, omega2 = coupling_set(p, k).evaluate(p, k, state.t)
    return -1j * coupling_matrix(g1, g2, omega1, omega2, p) @ state.amplitudes


def spectral_span(p: PhysicalParams) -> float:
    """Gershgorin bound on the eigenvalue spread of the coupling matrix."""
    return abs(p.Delta) + abs(p.delta) + 3.0 * p.g0 + p.Omega0


def dressing_map(p: PhysicalParams, k: Kinematics, t: float, couplings: Optional[CouplingSet] = None) -> np.ndarray:
    """Orthogonal map from bare states to laser-dressed states at time t.

    C1 is dressed with C2 by Ω2 and C5 with C4 by Ω1; the cavity coupling is
    left out since the window starts where g is negligible.
    """
    couplings = couplings or coupling_set(p, k)
    _, _, omega1, omega2 = couplings.evaluate(p, k, t)
    D = np.eye(5)
    for slow, partner, omega in ((0, 1, omega2), (4, 3, omega1)):
        block = np.array([[0.0, 0.5 * omega], [0.5 * omega, p.Delta]])
        _, vecs = np.linalg.eigh(block)
        j_slow = int(np.argmax(np.abs(vecs[0])))
        j_partner = 1 - j_slow
        v_slow = vecs[:, j_slow] * np.sign(vecs[0, j_slow])
        v_partner = vecs[:, j_partner] * np.sign(vecs[1, j_partner])
        idx = [slow, partner]
        D[np.ix_(idx, [slow])] = v_slow[:, None]
        D[np.ix_(idx, [partner])] = v_partner[:, None]
    return D


def _ordered_product(U: np.ndarray) -> np.ndarray:
    """Time-ordered product along axis 1 of a (segments, steps, d, d) stack."""
    d = U.shape[-1]
    while U.shape[1] > 1:
        if U.shape[1] % 2:
            pad = np.broadcast_to(np.eye(d, dtype=U.dtype), (U.shape[0], 1, d, d))
            U = np.concatenate([U, pad], axis=1)
        U = U[:, 1::2] @ U[:, 0::2]
    return U[:, 0]


def _step_unitaries(p, k, couplings, t0, h, steps: np.ndarray) -> np.ndarray:
    """exp(−i·H(t+h/2)·h) for each step index, via batched diagonalisation."""
    t_mid = t0 + (steps + 0.5) * h
    H = coupling_matrix(*couplings.evaluate(p, k, t_mid), p)
    evals, evecs = np.linalg.eigh(H)
    return (evecs * np.exp(-1j * h * evals)[..., None, :]) @ np.swapaxes(evecs, -1, -2)


def _propagate_exponential(psi0, p, k, couplings, t0, t1, settings: SolverSettings):
    """Exponential midpoint rule; at most _BATCH_STEPS steps are held in memory at once."""
    segments = settings.samples - 1
    h_target = settings.step_fraction * math.pi / spectral_span(p)
    per_segment = max(1, math.ceil((t1 - t0) / h_target / segments))
    n_steps = per_segment * segments
    h = (t1 - t0) / n_steps

    times = t0 + (t1 - t0) * np.arange(settings.samples) / segments
    amplitudes = np.empty((settings.samples, 5), dtype=complex)
    amplitudes[0] = psi0
    psi = psi0.copy()

    if per_segment <= _BATCH_STEPS:
        batch_segments = _BATCH_STEPS // per_segment
        for first in range(0, segments, batch_segments):
            count = min(batch_segments, segments - first)
            steps = np.arange(first * per_segment, (first + count) * per_segment)
            U = _step_unitaries(p, k, couplings, t0, h, steps)
            U_segments = _ordered_product(U.reshape(count, per_segment, 5, 5))
            for s in range(count):
                psi = U_segments[s] @ psi
                amplitudes[first + s + 1] = psi
    else:
        # a single segment spans several batches
        for s in range(segments):
            end = (s + 1) * per_segment
            for start in range(s * per_segment, end, _BATCH_STEPS):
                steps = np.arange(start, min(start + _BATCH_STEPS, end))
                U = _step_unitaries(p, k, couplings, t0, h, steps)
                psi = _ordered_product(U[None])[0] @ psi
            amplitudes[s + 1] = psi

    return times, amplitudes, n_steps, 0


def _propagate_runge_kutta(psi0, p, k, couplings, t0, t1, settings: SolverSettings):
    """Adaptive embedded Runge–Kutta from scipy; samples come from its dense output."""

    def fun(t, y):
        g1, g2, omega1, omega2 = couplings.evaluate(p, k, t)
        return -1j * (coupling_matrix(g1, g2, omega1, omega2, p) @ y)

    times = np.linspace(t0, t1, settings.samples)
    # never step across a whole waist transit
    max_step = 0.25 * p.w / k.speed
    sol = solve_ivp(
        fun, (t0, t1), psi0,
        method=settings.method.value,
        dense_output=True,
        rtol=settings.rtol,
        atol=settings.atol,
        max_step=max_step,
    )
    if sol.status < 0:
        failed_at = float(sol.t[-1]) if len(sol.t) else t0
        raise StiffnessError(f"integration failed: {sol.message}", failed_at)
    amplitudes = sol.sol(times).T
    amplitudes[-1] = sol.y[:, -1]
    # scipy does not report rejected steps
    return times, amplitudes, len(sol.t) - 1, 0, int(sol.nfev)


def tracking_refinement(p: PhysicalParams, t0: float, t1: float, segments: int) -> int:
    """Internal sub-samples per exported segment so that 2ξ moves less than TRACK_PHASE_STEP.

    2ξ advances at most at 2·λ_max, and cavity-mediated shifts add at most the
    same again; a gaussian laser adds the differential Stark shift Ω0²/(4|Δ|).
    """
    lambda_max = p.Omega0 ** 2 * p.g0 ** 2 / (4.0 * abs(p.delta) * p.Delta ** 2)
    rate = 4.0 * lambda_max
    if not p.is_constant_laser:
        rate += p.Omega0 ** 2 / (4.0 * abs(p.Delta))
    needed = math.ceil((t1 - t0) * rate / TRACK_PHASE_STEP)
    return max(1, math.ceil(needed / segments))


def _tracked_exchange(amplitudes: np.ndarray) -> Optional[np.ndarray]:
    start = np.abs(amplitudes[0]) ** 2
    if max(start[0], start[4]) < 0.5:
        return None
    return exchange_angle_series(*_exchange_pair(amplitudes))


def integrate(
    initial: FullState,
    p: PhysicalParams,
    k: Kinematics,
    settings: Optional[SolverSettings] = None,
) -> Trajectory:
    """Integrate the five-amplitude system across the transit window.

    The exchange angle is tracked on an internal grid fine enough to keep its
    branch, whatever ``settings.samples`` asks to export.
    """
    settings = settings or SolverSettings()
    psi0 = initial.amplitudes.copy()
    if abs(initial.norm - 1.0) > 1e-9:
        raise DomainError(f"initial state must be normalised, norm = {initial.norm:.12g}")
    if settings.method is PropagationMethod.MAGNUS and (
        settings.rtol != SolverSettings.rtol or settings.atol != SolverSettings.atol
    ):
        logger.info("tolerances_ignored", method=settings.method.value, rtol=settings.rtol, atol=settings.atol,
                    hint="the exponential propagator is controlled by step_fraction")

    couplings = coupling_set(p, k)
    t0, t1 = k.window(p.w)
    if settings.dressed_start:
        psi0 = dressing_map(p, k, t0, couplings) @ psi0

    refine = tracking_refinement(p, t0, t1, settings.samples - 1)
    internal = replace(settings, samples=(settings.samples - 1) * refine + 1)

    started = time.perf_counter()
    if settings.method is PropagationMethod.MAGNUS:
        times, amplitudes, steps, rejected = _propagate_exponential(psi0, p, k, couplings, t0, t1, internal)
        evaluations = steps
    else:
        times, amplitudes, steps, rejected, evaluations = _propagate_runge_kutta(
            psi0, p, k, couplings, t0, t1, internal)
    elapsed = time.perf_counter() - started

    norms = np.sum(np.abs(amplitudes) ** 2, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    track = _tracked_exchange(amplitudes)
    stats = SolverStats(settings.method.value, steps, rejected, drift, elapsed, evaluations)
    trajectory = Trajectory(
        np.asarray(times)[::refine],
        np.asarray(amplitudes)[::refine],
        stats,
        settings.dressed_start,
        None if track is None else track[::refine],
    )
    norms = norms[::refine]

    logger.info(
        "trajectory_integrated",
        method=stats.method, steps=steps, samples=len(trajectory), tracking_refinement=refine,
        norm_drift=drift, wall_time_s=round(elapsed, 3),
    )
    if abs(norms[-1] - 1.0) > settings.norm_tol:
        logger.warning("norm_drift_exceeded", drift=drift, bound=settings.norm_tol)
    return trajectory


@dataclass
class FullAngle:
    """Exchange angle recovered from a full-model trajectory."""
    theta: float
    folded: float
    leakage: float
    leakage_bound: float
    series: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    @property
    def is_adiabatic(self) -> bool:
        return self.leakage <= self.leakage_bound


def _exchange_pair(amplitudes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    start = np.abs(amplitudes[0]) ** 2
    if start[0] >= 0.5:
        return amplitudes[:, 0], amplitudes[:, 4]
    if start[4] >= 0.5:
        return amplitudes[:, 4], amplitudes[:, 0]
    raise DomainError("trajectory must start in |a,1̄;0⟩ or |1,ā;0⟩")


def extract_full_angle(traj: Trajectory, leakage_bound: float = 0.1) -> FullAngle:
    """Continuously tracked rotation angle between the initial and the exchanged state.

    ``folded`` is atan2(|C_other|, |C_init|) at the exit, which only resolves
    θ modulo the quarter turn; ``theta`` keeps the branch. The track recorded
    by ``integrate`` is used when present; otherwise the samples are unwrapped
    directly and must be dense enough for that.
    """
    a, b = _exchange_pair(traj.amplitudes)
    series = traj.exchange_track if traj.exchange_track is not None else exchange_angle_series(a, b)

    final = traj.final
    leakage = final.leakage
    folded = float(np.arctan2(abs(b[-1]), abs(a[-1])))
    angle = FullAngle(float(series[-1]), folded, leakage, leakage_bound, series)

    if not angle.is_adiabatic:
        logger.warning("non_adiabatic_transit", leakage=leakage, bound=leakage_bound)
        warnings.warn(
            f"intermediate-state population {leakage:.3g} exceeds {leakage_bound:.3g} after the transit",
            NonAdiabaticWarning,
            stacklevel=2,
        )
    return angle


def final_populations(traj: Trajectory) -> np.ndarray:
    """|C1|² … |C5|² at the window exit."""
    return traj.final.populations


def leakage(traj: Trajectory) -> float:
    return traj.final.leakage
