"""
Tests for physical parameters, kinematics and derived scales
"""

import math

import pytest

from utils.core.errors import DomainError
from utils.core.params import (
    DerivedScales,
    Kinematics,
    LaserProfile,
    PhysicalParams,
    SolverSettings,
    check_adiabaticity,
    derive_scales,
)


class TestPhysicalParams:
    """Test PhysicalParams validation."""

    def test_reference_parameters_accepted(self, reference_params):
        assert reference_params.is_constant_laser
        assert reference_params.to_dict()["laser_profile"] == "constant"

    @pytest.mark.parametrize("field,value", [
        ("delta", 0.0),
        ("Delta", 0.0),
        ("g0", 0.0),
        ("g0", -1.0),
        ("Omega0", -5.0),
        ("w", 0.0),
    ])
    def test_invalid_values_rejected(self, field, value):
        values = {"delta": 360.0, "Delta": 380.0, "g0": 27.0, "Omega0": 50.0, "w": 13.0}
        values[field] = value
        with pytest.raises(DomainError):
            PhysicalParams(**values)

    def test_laser_off_is_allowed(self):
        p = PhysicalParams(delta=360, Delta=380, g0=27, Omega0=0, w=13)
        assert p.Omega0 == 0

    def test_laser_waist_smaller_than_cavity_waist(self):
        with pytest.raises(DomainError, match="w_tilde"):
            PhysicalParams(delta=360, Delta=380, g0=27, Omega0=50, w=13, w_tilde=10,
                           laser_profile=LaserProfile.GAUSSIAN)


class TestKinematics:
    """Test transit geometry."""

    def test_default_start_positions(self):
        k = Kinematics(v=2.0, ell=4.0)
        z1, z2 = k.initial_positions(13.0)
        assert z1 == pytest.approx(-104.0)
        assert z1 - z2 == pytest.approx(4.0)

    def test_window_spans_both_transits(self):
        k = Kinematics(v=2.0, ell=4.0)
        t_start, t_end = k.window(13.0)
        assert t_start == pytest.approx(0.0)
        assert t_end == pytest.approx((16 * 13.0 + 4.0) / 2.0)

    def test_crossing_time_is_window_midpoint(self):
        k = Kinematics(v=0.3, ell=6.5)
        t_start, t_end = k.window(13.0)
        assert k.crossing_time(13.0) == pytest.approx(0.5 * (t_start + t_end))

    def test_explicit_midpoint(self):
        k = Kinematics(v=1.0, ell=2.0, z_mid=-150.0)
        assert k.initial_positions(13.0) == pytest.approx((-149.0, -151.0))

    @pytest.mark.parametrize("kwargs", [
        {"v": 0.0, "ell": 0.0},
        {"v": -1.0, "ell": 0.0},
        {"v": 1.0, "ell": -0.1},
        {"v": 1.0, "ell": 0.0, "window_sigma": 4.0},
    ])
    def test_invalid_kinematics(self, kwargs):
        with pytest.raises(DomainError):
            Kinematics(**kwargs)


class TestSolverSettings:

    def test_defaults(self):
        settings = SolverSettings()
        assert settings.method.value == "magnus"
        assert settings.rtol == 1e-9
        assert settings.atol == 1e-12
        assert settings.dressed_start

    @pytest.mark.parametrize("kwargs", [{"step_fraction": 0.0}, {"step_fraction": 1.5}, {"samples": 1}, {"rtol": 0.0}])
    def test_invalid_settings(self, kwargs):
        with pytest.raises(DomainError):
            SolverSettings(**kwargs)


class TestDerivedScales:
    """Test the reduced-unit scales."""

    def test_reference_velocity_unit(self, reference_params):
        scales = derive_scales(reference_params)
        assert scales.velocity_unit == pytest.approx(0.46, abs=0.01)
        assert scales.velocity_unit == pytest.approx(50**2 * 27**2 * 13 / (360 * 380**2))
        assert scales.distance_unit == 13.0

    def test_scaling_laws(self, reference_params):
        base = derive_scales(reference_params).velocity_unit
        wider = derive_scales(PhysicalParams(360, 380, 27, 50, 26)).velocity_unit
        stronger = derive_scales(PhysicalParams(360, 380, 27, 100, 13)).velocity_unit
        detuned = derive_scales(PhysicalParams(720, 760, 27, 50, 13)).velocity_unit
        assert wider == pytest.approx(0.91, abs=0.01)
        assert stronger == pytest.approx(4 * base)
        assert detuned == pytest.approx(base / 8)

    def test_reduce_and_absolute_are_inverse(self, reference_params):
        scales = derive_scales(reference_params)
        v, ell = scales.absolute(0.4, 1.5)
        assert scales.reduce(v, ell) == pytest.approx((0.4, 1.5))

    def test_reduce_without_laser(self):
        scales = DerivedScales(velocity_unit=0.0, distance_unit=13.0)
        with pytest.raises(DomainError, match="Omega0 = 0"):
            scales.reduce(1.0, 0.0)


class TestAdiabaticity:
    """Test the dispersive-regime check."""

    def test_reference_ratios(self, reference_params):
        report = check_adiabaticity(reference_params)
        assert report.ratios == pytest.approx((360 / 27, 380 / 50, 360 * 380 / 27**2))
        assert report.is_adiabatic
        assert report.failed == []

    def test_large_margin_fails_two_photon_condition(self, reference_params):
        report = check_adiabaticity(reference_params, margin=200)
        assert not report.is_adiabatic
        assert "two_photon" in report.failed
        assert report.conditions[2].ratio == pytest.approx(187.65, abs=0.01)

    def test_strong_coupling_is_not_adiabatic(self):
        p = PhysicalParams(delta=360, Delta=380, g0=360, Omega0=50, w=13)
        report = check_adiabaticity(p)
        assert "cavity_detuning" in report.failed

    def test_laser_off_ratio_is_infinite(self):
        p = PhysicalParams(delta=360, Delta=380, g0=27, Omega0=0, w=13)
        report = check_adiabaticity(p)
        assert math.isinf(report.conditions[1].ratio)
        assert report.conditions[1].passed

    def test_margin_below_one(self, reference_params):
        with pytest.raises(DomainError):
            check_adiabaticity(reference_params, margin=0.5)

    @pytest.mark.parametrize("g0,Omega0", [(27, 50), (72, 50), (27, 76), (200, 300)])
    def test_raising_margin_never_turns_fail_into_pass(self, g0, Omega0):
        p = PhysicalParams(delta=360, Delta=380, g0=g0, Omega0=Omega0, w=13)
        margins = [1, 2, 5, 7.6, 10, 50, 200, 1000]
        reports = [check_adiabaticity(p, margin) for margin in margins]
        for lower, higher in zip(reports, reports[1:]):
            assert higher.ratios == lower.ratios
            assert set(lower.failed) <= set(higher.failed)
            assert lower.is_adiabatic or not higher.is_adiabatic
