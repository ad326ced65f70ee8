"""
Tests for reduced-plane grids and their specs
"""

import numpy as np
import pytest

from utils.analysis.grid import ReducedGrid, map_rows, parse_grid_spec, parse_range
from utils.core.errors import DomainError


class TestReducedGrid:
    """Test grid construction."""

    def test_default_axes(self):
        grid = ReducedGrid.build()
        assert grid.shape == (200, 200)
        assert grid.v_over_K[0] == pytest.approx(1.2 / 200)
        assert grid.v_over_K[-1] == pytest.approx(1.2)
        assert grid.ell_over_w[-1] == pytest.approx(3.0)

    def test_custom_ranges(self):
        grid = ReducedGrid.build((3, 2), v_range=(0.1, 0.3), ell_range=(1.0, 2.0))
        np.testing.assert_allclose(grid.v_over_K, [0.1, 0.2, 0.3])
        np.testing.assert_allclose(grid.ell_over_w, [1.0, 2.0])

    def test_velocity_must_be_positive(self):
        with pytest.raises(DomainError, match="positive"):
            ReducedGrid.build((3, 2), v_range=(0.0, 1.0))

    def test_distance_must_be_non_negative(self):
        with pytest.raises(DomainError, match="non-negative"):
            ReducedGrid(np.array([0.5]), np.array([-1.0]))

    def test_mesh_uses_matrix_indexing(self):
        v, ell = ReducedGrid.build((4, 3)).mesh()
        assert v.shape == (4, 3)
        assert np.all(v[:, 0] == v[:, 1])

    def test_to_frame(self):
        grid = ReducedGrid.build((2, 3))
        frame = grid.to_frame(np.arange(6.0).reshape(2, 3))
        assert frame.index.name == "v_over_K"
        assert frame.loc[grid.v_over_K[1], grid.ell_over_w[2]] == 5.0


class TestSpecs:
    """Test command-line grid and range strings."""

    def test_grid_spec(self):
        assert parse_grid_spec("30x20") == (30, 20)
        assert parse_grid_spec("8X4") == (8, 4)

    @pytest.mark.parametrize("spec", ["30by20", "30x", "0x5", "3x-1"])
    def test_bad_grid_spec(self, spec):
        with pytest.raises(DomainError):
            parse_grid_spec(spec)

    def test_range(self):
        assert parse_range("0:3") == (0.0, 3.0)
        assert parse_range("1.5:1.5") == (1.5, 1.5)

    @pytest.mark.parametrize("spec", ["3:1", "a:b", "1-2"])
    def test_bad_range(self, spec):
        with pytest.raises(DomainError):
            parse_range(spec)


class TestMapRows:
    """Test row-block evaluation."""

    def test_threads_keep_row_order(self):
        grid = ReducedGrid.build((17, 4))
        single = map_rows(lambda v, ell: v + 10 * ell, grid)
        threaded = map_rows(lambda v, ell: v + 10 * ell, grid, threads=5)
        np.testing.assert_array_equal(single, threaded)

    def test_more_threads_than_rows(self):
        grid = ReducedGrid.build((2, 2))
        assert map_rows(lambda v, ell: v * ell, grid, threads=8).shape == (2, 2)
