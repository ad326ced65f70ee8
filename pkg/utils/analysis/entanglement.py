"""
Entanglement of the hyperfine pair after the entangler sequence.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import pandas as pd
from scipy.special import entr

from ..core.errors import DomainError
from ..engines.effective_dynamics import theta_reduced
from .grid import ReducedGrid, map_rows

# eigenvalues in [−EIGEN_CLAMP, 0) are rounding noise
EIGEN_CLAMP = 1e-12


@dataclass
class QubitDensity:
    """2×2 reduced density operator of one qubit."""
    matrix: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (2, 2):
            raise DomainError(f"qubit density must be 2×2, got {self.matrix.shape}")
        if not np.allclose(self.matrix, self.matrix.conj().T, atol=1e-12):
            raise DomainError("qubit density must be Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > 1e-12:
            raise DomainError(f"qubit density must have unit trace, got {np.trace(self.matrix).real:.15g}")
        self.eigenvalues = np.linalg.eigvalsh(self.matrix)
        if self.eigenvalues.min() < -EIGEN_CLAMP:
            raise DomainError(f"qubit density has negative eigenvalue {self.eigenvalues.min():.3g}")


def reduce_first_qubit(state: Sequence[complex]) -> QubitDensity:
    """ρ = Tr₂|Φ⟩⟨Φ| for amplitudes over (|0,0̄⟩, |0,1̄⟩, |1,0̄⟩, |1,1̄⟩)."""
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (4,):
        raise DomainError(f"two-qubit state has 4 amplitudes, got shape {psi.shape}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"two-qubit state must be normalised, norm = {norm:.12g}")
    amplitudes = (psi / math.sqrt(norm)).reshape(2, 2)
    return QubitDensity(amplitudes @ amplitudes.conj().T)


def von_neumann_entropy(rho: QubitDensity) -> float:
    """−Σ λ·log₂λ in bits, 0·log 0 = 0."""
    eigenvalues = np.clip(rho.eigenvalues, 0.0, None)
    return float(np.sum(entr(eigenvalues)) / math.log(2))


def entropy_of_theta(theta):
    """E(θ) = −cos²θ·log₂cos²θ − sin²θ·log₂sin²θ; broadcasts."""
    theta = np.asarray(theta, dtype=float)
    c2 = np.cos(theta) ** 2
    s2 = np.sin(theta) ** 2
    entropy = np.clip((entr(c2) + entr(s2)) / math.log(2), 0.0, 1.0)
    return float(entropy) if entropy.ndim == 0 else entropy


def entropy_map(grid: ReducedGrid, threads: int = 1) -> pd.DataFrame:
    """E over a reduced (υ/K, ℓ/w) grid from the closed-form angle."""
    values = map_rows(lambda v, ell: entropy_of_theta(theta_reduced(v, ell)), grid, threads)
    return grid.to_frame(values)
