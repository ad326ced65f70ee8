"""
Pulse sequences on the {0, 1, a} ⊗ {0̄, 1̄, ā} space of the atom pair.

A gate diagram is an ordered list of pulses (Raman zones L1/L2, Ramsey zones
R1/R2 and the cavity pass) executed like pipeline stages: each pulse kind has
a registered builder returning its 9×9 unitary. The composed operator is then
projected onto the hyperfine basis (|0,0̄⟩, |0,1̄⟩, |1,0̄⟩, |1,1̄⟩).

Basis index of |i, j̄⟩ is 3·i + j with (0, 1, a) ↦ (0, 1, 2).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import DomainError
from ..core.log import get_logger
from .effective_dynamics import TwoQubitOperator

logger = get_logger(__name__)

LEVELS = ("0", "1", "a")
HYPERFINE_INDEX = [0, 1, 3, 4]
A_ONE_INDEX = 7   # |a,1̄⟩
ONE_A_INDEX = 5   # |1,ā⟩

ThetaLike = Union[float, np.ndarray]


class PulseKind(Enum):
    RAMAN_L1 = "raman-L1"
    RAMAN_L2 = "raman-L2"
    RAMSEY = "ramsey"
    CAVITY_PASS = "cavity-pass"


class GateDiagram(Enum):
    ENTANGLER = "entangler"
    ISWAP = "i-swap"
    CONTROLLED_Z = "controlled-Z"
    CONTROLLED_NOT_BAR = "controlled-NOT-bar"

    @classmethod
    def parse(cls, name: Union[str, "GateDiagram"]) -> "GateDiagram":
        if isinstance(name, GateDiagram):
            return name
        key = str(name).strip()
        for member in cls:
            if member.value == key:
                return member
        alias = _ALIASES.get(key.lower())
        if alias is None:
            raise ValueError(f"Unsupported gate diagram: {name}")
        return alias


_ALIASES = {
    "iswap": GateDiagram.ISWAP,
    "cz": GateDiagram.CONTROLLED_Z,
    "cnotbar": GateDiagram.CONTROLLED_NOT_BAR,
    "cnot-bar": GateDiagram.CONTROLLED_NOT_BAR,
}


@dataclass
class NineState:
    """Amplitudes over |i, j̄⟩, i for atom 1 and j for atom 2."""
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (9,):
            raise DomainError(f"a nine-state has 9 amplitudes, got shape {self.amplitudes.shape}")
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"nine-state must be normalised, norm = {norm:.15g}")

    @classmethod
    def product(cls, atom1: str, atom2: str) -> "NineState":
        """Basis state from level labels, e.g. product("a", "1") for |a,1̄⟩."""
        try:
            index = 3 * LEVELS.index(atom1) + LEVELS.index(atom2)
        except ValueError:
            raise DomainError(f"levels must be one of {LEVELS}, got ({atom1!r}, {atom2!r})") from None
        amplitudes = np.zeros(9, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    def amplitude(self, atom1: str, atom2: str) -> complex:
        return self.amplitudes[3 * LEVELS.index(atom1) + LEVELS.index(atom2)]

    @property
    def hyperfine(self) -> np.ndarray:
        return self.amplitudes[HYPERFINE_INDEX]

    @property
    def leakage(self) -> float:
        return float(1.0 - np.sum(np.abs(self.hyperfine) ** 2))


@dataclass(frozen=True)
class PulseSpec:
    """One zone of a gate diagram."""
    kind: PulseKind
    targets: Tuple[int, ...] = (1, 2)
    eta: Optional[float] = None
    theta: Optional[ThetaLike] = None

    def __post_init__(self):
        if self.kind is not PulseKind.CAVITY_PASS:
            if not self.targets or not set(self.targets) <= {1, 2}:
                raise DomainError(f"pulse targets must be a non-empty subset of (1, 2), got {self.targets}")
        if self.kind is PulseKind.RAMSEY and self.eta is None:
            raise DomainError("ramsey pulse requires a rotation angle eta")


_RAMAN = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)


def _ramsey(eta: float) -> np.ndarray:
    c, s = math.cos(eta / 2), math.sin(eta / 2)
    # |0⟩ → c|0⟩ − s|1⟩, |1⟩ → s|0⟩ + c|1⟩, |a⟩ untouched
    return np.array([[c, s, 0], [-s, c, 0], [0, 0, 1]], dtype=complex)


def _on_targets(single: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    identity = np.eye(3, dtype=complex)
    first = single if 1 in targets else identity
    second = single if 2 in targets else identity
    return np.kron(first, second)


def _raman_unitary(pulse: PulseSpec, theta: Optional[ThetaLike]) -> np.ndarray:
    return _on_targets(_RAMAN, pulse.targets)


def _ramsey_unitary(pulse: PulseSpec, theta: Optional[ThetaLike]) -> np.ndarray:
    return _on_targets(_ramsey(pulse.eta), pulse.targets)


def _cavity_unitary(pulse: PulseSpec, theta: Optional[ThetaLike]) -> np.ndarray:
    angle = pulse.theta if pulse.theta is not None else theta
    if angle is None:
        raise DomainError("cavity pass requires a coupling angle theta")
    angle = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(angle)):
        raise DomainError("coupling angle must be finite")
    c, s = np.cos(angle), np.sin(angle)
    U = np.broadcast_to(np.eye(9, dtype=complex), angle.shape + (9, 9)).copy()
    for i, j in ((A_ONE_INDEX, ONE_A_INDEX), (ONE_A_INDEX, A_ONE_INDEX)):
        U[..., i, i] = c
        U[..., j, i] = -1j * s
    return U


PULSE_BUILDERS: Dict[PulseKind, Callable[[PulseSpec, Optional[ThetaLike]], np.ndarray]] = {
    PulseKind.RAMAN_L1: _raman_unitary,
    PulseKind.RAMAN_L2: _raman_unitary,
    PulseKind.RAMSEY: _ramsey_unitary,
    PulseKind.CAVITY_PASS: _cavity_unitary,
}


def pulse_unitary(pulse: PulseSpec, theta: Optional[ThetaLike] = None) -> np.ndarray:
    """9×9 unitary of one pulse; a cavity pass broadcasts over array θ."""
    builder = PULSE_BUILDERS.get(pulse.kind)
    if builder is None:
        raise ValueError(f"Unsupported pulse kind: {pulse.kind}")
    return builder(pulse, theta)


def apply_pulse(state: NineState, pulse: PulseSpec) -> NineState:
    return NineState(pulse_unitary(pulse) @ state.amplitudes)


def diagram_pulses(diagram: Union[str, GateDiagram]) -> List[PulseSpec]:
    """Temporal pulse list of a gate diagram; the cavity pass takes the sequence θ."""
    diagram = GateDiagram.parse(diagram)
    cavity = PulseSpec(PulseKind.CAVITY_PASS)
    if diagram in (GateDiagram.ENTANGLER, GateDiagram.ISWAP):
        return [PulseSpec(PulseKind.RAMAN_L1, (1, 2)), cavity, PulseSpec(PulseKind.RAMAN_L2, (1, 2))]
    if diagram is GateDiagram.CONTROLLED_Z:
        # atom 2 skips the Raman zones
        return [PulseSpec(PulseKind.RAMAN_L1, (1,)), cavity, PulseSpec(PulseKind.RAMAN_L2, (1,))]
    # control atom 1 skips the Raman zones; atom 2 is wrapped in Ramsey zones
    return [
        PulseSpec(PulseKind.RAMSEY, (2,), eta=math.pi / 2),
        PulseSpec(PulseKind.RAMAN_L1, (2,)),
        cavity,
        PulseSpec(PulseKind.RAMAN_L2, (2,)),
        PulseSpec(PulseKind.RAMSEY, (2,), eta=3 * math.pi / 2),
    ]


def sequence_operator(diagram: Union[str, GateDiagram], theta: ThetaLike) -> np.ndarray:
    """Composed 9×9 unitary of a diagram, shape θ.shape + (9, 9)."""
    U = np.eye(9, dtype=complex)
    for pulse in diagram_pulses(diagram):
        U = pulse_unitary(pulse, theta) @ U
    return U


def project_hyperfine(U: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Hyperfine block of a sequence operator and the leakage of each input column."""
    columns = U[..., :, HYPERFINE_INDEX]
    block = columns[..., HYPERFINE_INDEX, :]
    leakage = np.clip(1.0 - np.sum(np.abs(block) ** 2, axis=-2), 0.0, None)
    return block, leakage


@dataclass
class GateResult:
    """Outcome of running one diagram at one coupling angle."""
    diagram: GateDiagram
    theta: float
    operator: TwoQubitOperator
    outputs: np.ndarray = field(repr=False)
    fidelity: Optional[float] = None

    @property
    def column_leakage(self) -> np.ndarray:
        return self.operator.column_leakage


def run_sequence(diagram: Union[str, GateDiagram], theta: float) -> GateResult:
    """Drive the four hyperfine inputs through a diagram and project the outputs."""
    diagram = GateDiagram.parse(diagram)
    if not math.isfinite(theta):
        raise DomainError(f"coupling angle must be finite, got {theta}")
    U = sequence_operator(diagram, theta)
    block, leak = project_hyperfine(U)
    fidelity = None if diagram is GateDiagram.ENTANGLER else gate_fidelity(diagram, theta)
    return GateResult(diagram, float(theta), TwoQubitOperator(block, leak), U[:, HYPERFINE_INDEX], fidelity)


_IDEAL = {
    GateDiagram.ISWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex),
    GateDiagram.CONTROLLED_Z: np.diag([1, -1, 1, 1]).astype(complex),
    GateDiagram.CONTROLLED_NOT_BAR: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]], dtype=complex),
}

# maximum of the distance over θ ∈ [0, 2π)
NORMALIZERS = {
    GateDiagram.ISWAP: 2.0 * math.sqrt(2.0),
    GateDiagram.CONTROLLED_Z: 2.0,
    GateDiagram.CONTROLLED_NOT_BAR: 2.0,
}

PHASE_FREE = {GateDiagram.CONTROLLED_NOT_BAR}


def ideal_gate(name: Union[str, GateDiagram]) -> TwoQubitOperator:
    diagram = GateDiagram.parse(name)
    if diagram not in _IDEAL:
        raise ValueError(f"Unsupported ideal gate: {diagram.value}")
    return TwoQubitOperator(_IDEAL[diagram].copy())


def remove_global_phase(block: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Rotate ``block`` by the phase maximising |Tr(ideal†·block)|; broadcasts."""
    overlap = np.einsum("ij,...ij->...", ideal.conj(), block)
    phase = np.where(np.abs(overlap) > 0, overlap / np.where(overlap == 0, 1, np.abs(overlap)), 1.0)
    return block * np.conj(phase)[..., None, None]


def gate_fidelity(name: Union[str, GateDiagram], theta: ThetaLike) -> ThetaLike:
    """F = 1 − ‖U_actual − U_ideal‖ / max‖·‖, leakage counted as column deficit."""
    diagram = GateDiagram.parse(name)
    if diagram not in _IDEAL:
        raise ValueError(f"Unsupported ideal gate: {diagram.value}")
    ideal = _IDEAL[diagram]
    block, leak = project_hyperfine(sequence_operator(diagram, theta))
    if diagram in PHASE_FREE:
        block = remove_global_phase(block, ideal)
    distance_sq = np.sum(np.abs(block - ideal) ** 2, axis=(-2, -1)) + np.sum(leak, axis=-1)
    fidelity = np.clip(1.0 - np.sqrt(distance_sq) / NORMALIZERS[diagram], 0.0, 1.0)
    return float(fidelity) if np.ndim(fidelity) == 0 else fidelity


def diagram_summary(diagram: Union[str, GateDiagram]) -> List[Dict[str, object]]:
    """Rows describing each pulse of a diagram; fidelity maps echo them in their CSV header."""
    rows = []
    for step, pulse in enumerate(diagram_pulses(diagram), start=1):
        rows.append({
            "step": step,
            "kind": pulse.kind.value,
            "targets": ",".join(str(t) for t in pulse.targets),
            "eta": pulse.eta,
        })
    return rows
