"""
Tests for reduced densities and entanglement entropy
"""

import math

import numpy as np
import pytest

from utils.analysis.entanglement import (
    QubitDensity,
    entropy_map,
    entropy_of_theta,
    reduce_first_qubit,
    von_neumann_entropy,
)
from utils.analysis.grid import ReducedGrid
from utils.core.errors import DomainError
from utils.engines.gate_lab import run_sequence


class TestQubitDensity:
    """Test validation of 2×2 density operators."""

    def test_pure_state(self):
        rho = QubitDensity(np.diag([1.0, 0.0]))
        np.testing.assert_allclose(rho.eigenvalues, [0.0, 1.0])

    def test_shape(self):
        with pytest.raises(DomainError, match="2×2"):
            QubitDensity(np.eye(3) / 3)

    def test_hermitian(self):
        with pytest.raises(DomainError, match="Hermitian"):
            QubitDensity(np.array([[0.5, 0.1], [0.2, 0.5]]))

    def test_trace(self):
        with pytest.raises(DomainError, match="unit trace"):
            QubitDensity(np.eye(2))

    def test_negative_eigenvalue(self):
        with pytest.raises(DomainError, match="negative eigenvalue"):
            QubitDensity(np.diag([1.5, -0.5]))


class TestReduction:
    """Test the partial trace over the second atom."""

    def test_product_state_is_pure(self):
        rho = reduce_first_qubit([0, 1, 0, 0])
        np.testing.assert_allclose(rho.matrix, np.diag([1, 0]))
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state_is_maximally_mixed(self):
        rho = reduce_first_qubit(np.array([0, 1, -1j, 0]) / math.sqrt(2))
        np.testing.assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-15)
        assert von_neumann_entropy(rho) == pytest.approx(1.0)

    def test_partially_entangled(self):
        state = [0, math.cos(math.pi / 6), -1j * math.sin(math.pi / 6), 0]
        rho = reduce_first_qubit(state)
        np.testing.assert_allclose(rho.matrix, np.diag([0.75, 0.25]), atol=1e-15)
        assert von_neumann_entropy(rho) == pytest.approx(0.811278, abs=1e-6)

    def test_wrong_length(self):
        with pytest.raises(DomainError, match="4 amplitudes"):
            reduce_first_qubit([1, 0, 0])

    def test_unnormalised(self):
        with pytest.raises(DomainError, match="normalised"):
            reduce_first_qubit([1, 1, 0, 0])


class TestEntropyOfTheta:
    """Test the entangler's entropy curve."""

    @pytest.mark.parametrize("theta,expected", [
        (0.0, 0.0),
        (math.pi / 4, 1.0),
        (math.pi / 2, 0.0),
        (3 * math.pi / 4, 1.0),
        (math.pi, 0.0),
        (math.pi / 6, 0.811278),
        (math.pi / 8, 0.600876),
    ])
    def test_landmarks(self, theta, expected):
        assert entropy_of_theta(theta) == pytest.approx(expected, abs=1e-6)

    def test_maximal_on_every_branch(self):
        theta = (2 * np.arange(5) + 1) * math.pi / 4
        np.testing.assert_allclose(entropy_of_theta(theta), 1.0, atol=1e-12)

    def test_mirror_symmetry(self):
        theta = np.linspace(0.0, math.pi / 2, 11)
        np.testing.assert_allclose(entropy_of_theta(theta), entropy_of_theta(math.pi / 2 - theta), atol=1e-12)

    def test_matches_entangler_output(self):
        theta = 0.6
        column = run_sequence("entangler", theta).operator.matrix[:, 1]
        assert von_neumann_entropy(reduce_first_qubit(column)) == pytest.approx(entropy_of_theta(theta))

    def test_bounded(self):
        values = entropy_of_theta(np.linspace(0, 10, 1000))
        assert values.min() >= 0.0 and values.max() <= 1.0


class TestEntropyMap:
    """Test entropy sweeps over the reduced plane."""

    def test_shape_and_axes(self):
        grid = ReducedGrid.build((20, 7))
        frame = entropy_map(grid)
        assert frame.shape == (20, 7)
        assert frame.index.name == "v_over_K"
        assert frame.columns.name == "ell_over_w"

    def test_threads_give_same_result(self):
        grid = ReducedGrid.build((31, 5))
        np.testing.assert_allclose(entropy_map(grid, threads=4).to_numpy(), entropy_map(grid).to_numpy(), rtol=1e-14)

    def test_peak_on_first_condition_curve(self):
        v = math.sqrt(math.pi / 32) / (math.pi / 4)
        grid = ReducedGrid(np.array([v]), np.array([0.0]))
        assert entropy_map(grid).iloc[0, 0] == pytest.approx(1.0)
