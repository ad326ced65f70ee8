"""
Shared fixtures: the reference parameter set and a small, fast toy system.
"""

import pytest
import yaml

from utils.core.params import Kinematics, PhysicalParams

REFERENCE = {"delta": 360.0, "Delta": 380.0, "g0": 27.0, "Omega0": 50.0, "w": 13.0}

# short transit with few fast periods; integrates in well under a second
TOY = {"delta": 20.0, "Delta": 20.0, "g0": 2.0, "Omega0": 4.0, "w": 1.0}


@pytest.fixture
def reference_params():
    return PhysicalParams(**REFERENCE)


@pytest.fixture
def toy_params():
    return PhysicalParams(**TOY)


@pytest.fixture
def toy_kinematics():
    return Kinematics(v=0.5, ell=0.0)


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML config and return its path."""

    def _write(values, name="run.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(values), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def reference_config_file(write_config):
    return write_config(dict(REFERENCE, v=0.1823, ell=0.0))


@pytest.fixture
def toy_config_file(write_config):
    return write_config(dict(TOY, v=0.5, ell=0.0), name="toy.yaml")
