"""
Sweep grids over the (υ/K, ℓ/w) plane and their tabular form.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.errors import DomainError

DEFAULT_GRID = (200, 200)
DEFAULT_V_MAX = 1.2
DEFAULT_ELL_RANGE = (0.0, 3.0)


@dataclass(frozen=True)
class ReducedGrid:
    """Rectilinear grid: rows are υ/K values, columns are ℓ/w values."""
    v_over_K: np.ndarray
    ell_over_w: np.ndarray

    def __post_init__(self):
        if self.v_over_K.ndim != 1 or self.ell_over_w.ndim != 1:
            raise DomainError("grid axes must be one-dimensional")
        if len(self.v_over_K) == 0 or len(self.ell_over_w) == 0:
            raise DomainError("grid axes must not be empty")
        if np.any(self.v_over_K <= 0):
            raise DomainError("grid velocities must be positive")
        if np.any(self.ell_over_w < 0):
            raise DomainError("grid distances must be non-negative")

    @classmethod
    def build(
        cls,
        shape: Tuple[int, int] = DEFAULT_GRID,
        v_range: Optional[Tuple[float, float]] = None,
        ell_range: Tuple[float, float] = DEFAULT_ELL_RANGE,
    ) -> "ReducedGrid":
        """Evenly spaced axes; the default velocity axis runs from V_MAX/N to V_MAX."""
        n_v, n_ell = shape
        if n_v < 1 or n_ell < 1:
            raise DomainError(f"grid shape must be positive, got {n_v}x{n_ell}")
        if v_range is None:
            v_range = (DEFAULT_V_MAX / n_v, DEFAULT_V_MAX)
        return cls(
            v_over_K=np.linspace(v_range[0], v_range[1], n_v),
            ell_over_w=np.linspace(ell_range[0], ell_range[1], n_ell),
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.v_over_K), len(self.ell_over_w)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.v_over_K, self.ell_over_w, indexing="ij")

    def to_frame(self, values: np.ndarray) -> pd.DataFrame:
        """Cells indexed by υ/K, one column per ℓ/w value."""
        frame = pd.DataFrame(values, index=pd.Index(self.v_over_K, name="v_over_K"), columns=self.ell_over_w)
        frame.columns.name = "ell_over_w"
        return frame


def parse_grid_spec(spec: str) -> Tuple[int, int]:
    """'200x200' → (200, 200)."""
    try:
        n_v, n_ell = (int(part) for part in spec.lower().split("x"))
    except ValueError:
        raise DomainError(f"grid must look like NXxNY, got {spec!r}") from None
    if n_v < 1 or n_ell < 1:
        raise DomainError(f"grid dimensions must be positive, got {spec!r}")
    return n_v, n_ell


def parse_range(spec: str) -> Tuple[float, float]:
    """'a:b' → (a, b) with a ≤ b."""
    try:
        low, high = (float(part) for part in spec.split(":"))
    except ValueError:
        raise DomainError(f"range must look like a:b, got {spec!r}") from None
    if high < low:
        raise DomainError(f"range is empty: {spec!r}")
    return low, high


def map_rows(fn: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: ReducedGrid, threads: int = 1) -> np.ndarray:
    """Evaluate ``fn(v_column, ell_row)`` per block of rows, keeping row order."""
    if threads <= 1:
        return fn(grid.v_over_K[:, None], grid.ell_over_w[None, :])

    blocks = np.array_split(np.arange(len(grid.v_over_K)), min(threads, len(grid.v_over_K)))
    with ThreadPoolExecutor(max_workers=threads) as executor:
        parts = list(executor.map(
            lambda rows: fn(grid.v_over_K[rows][:, None], grid.ell_over_w[None, :]),
            blocks,
        ))
    return np.vstack(parts)
