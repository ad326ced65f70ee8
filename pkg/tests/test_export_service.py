"""
Tests for CSV tables, run manifests and text reports
"""

import numpy as np
import pandas as pd
import pytest
import yaml

from utils.analysis.grid import ReducedGrid
from utils.core.params import check_adiabaticity, derive_scales
from utils.export_service import (
    RunManifest,
    grid_in_units,
    read_csv,
    render_report,
    save_csv,
    save_grid,
)


class TestCsv:
    """Test tables with a parameter header."""

    def test_header_block(self, tmp_path):
        path = save_csv(pd.DataFrame({"x": [0.1, 0.2]}), tmp_path / "t.csv", {"delta": 360.0, "w_tilde": None})
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[:3] == ["# delta = 360.0", "# w_tilde = none", "x"]

    def test_read_skips_header(self, tmp_path):
        frame = pd.DataFrame({"a": [1.5, 2.5], "b": [3, 4]})
        path = save_csv(frame, tmp_path / "nested" / "t.csv", {"kind": "theta"})
        restored = read_csv(path)
        pd.testing.assert_frame_equal(restored, frame)

    def test_float_format_is_stable(self, tmp_path):
        path = save_csv(pd.DataFrame({"x": [1 / 3]}), tmp_path / "t.csv", {})
        assert path.read_text(encoding="utf-8").splitlines()[-1] == "0.333333333333"


class TestGrids:
    """Test grid tables and unit conversion."""

    def test_save_grid_layout(self, tmp_path):
        grid = ReducedGrid.build((2, 3), v_range=(0.5, 1.0), ell_range=(0.0, 1.0))
        frame = grid.to_frame(np.zeros((2, 3)))
        restored = read_csv(save_grid(frame, tmp_path / "g.csv", {}))
        assert list(restored.columns) == ["v_over_K", "0", "0.5", "1"]
        assert restored["v_over_K"].tolist() == [0.5, 1.0]

    def test_absolute_units(self, reference_params):
        grid = ReducedGrid.build((2, 2), v_range=(1.0, 2.0), ell_range=(0.0, 1.0))
        frame = grid_in_units(grid.to_frame(np.zeros((2, 2))), "absolute", derive_scales(reference_params))
        assert frame.index.name == "v_m_per_s"
        assert frame.index[0] == pytest.approx(0.455765, rel=1e-5)
        assert frame.columns[1] == pytest.approx(13.0)

    def test_reduced_units_untouched(self):
        frame = ReducedGrid.build((2, 2)).to_frame(np.zeros((2, 2)))
        assert grid_in_units(frame, "reduced") is frame

    def test_unknown_units(self):
        frame = ReducedGrid.build((2, 2)).to_frame(np.zeros((2, 2)))
        with pytest.raises(ValueError, match="Unsupported units"):
            grid_in_units(frame, "imperial")


class TestManifest:
    """Test the YAML record of a run."""

    def test_save(self, tmp_path):
        manifest = RunManifest(command="lines", output_dir=str(tmp_path), config_path="setup.yaml",
                               parameters={"delta": 360.0, "laser_profile": "constant", "w_tilde": None})
        manifest.add_output(tmp_path / "max-entanglement_n0.csv")
        data = yaml.safe_load(manifest.save().read_text(encoding="utf-8"))
        assert data["command"] == "lines"
        assert data["outputs"] == ["max-entanglement_n0.csv"]
        assert data["parameters"]["delta"] == 360.0
        assert data["parameters"]["w_tilde"] == "none"
        assert data["timestamp"].endswith("Z")


class TestReports:
    """Test the jinja2 text reports."""

    def test_validate_report(self, reference_params):
        text = render_report(
            "validate.txt.j2",
            source="setup.yaml",
            scales=derive_scales(reference_params),
            report=check_adiabaticity(reference_params, 20),
        )
        assert "velocity unit K    0.4558 m/s" in text
        assert "NOT adiabatic (cavity_detuning, laser_detuning)" in text
