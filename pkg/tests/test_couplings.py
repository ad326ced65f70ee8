"""
Tests for the coupling profiles along the transit
"""

import numpy as np
import pytest

from utils.core.errors import ConfigurationError, DomainError
from utils.core.params import Kinematics, LaserProfile, PhysicalParams
from utils.physics.couplings import (
    CouplingKind,
    CouplingTrack,
    coupling_product,
    coupling_set,
    g_of_t,
    omega_of_t,
)


class TestCouplingTrack:
    """Test single-atom tracks."""

    def test_atom_index_validated(self):
        with pytest.raises(DomainError, match="atom_index"):
            CouplingTrack(3, 0.0, CouplingKind.CAVITY)

    def test_position_moves_with_velocity(self, toy_kinematics):
        track = CouplingTrack(1, -8.0, CouplingKind.CAVITY)
        assert track.position(toy_kinematics, 4.0) == pytest.approx(-6.0)


class TestCavityCoupling:
    """Test the gaussian cavity mode."""

    def test_peak_at_waist_crossing(self, reference_params):
        k = Kinematics(v=1.0, ell=0.0)
        couplings = coupling_set(reference_params, k)
        g1, g2, _, _ = couplings.evaluate(reference_params, k, k.crossing_time(reference_params.w))
        assert g1 == pytest.approx(27.0)
        assert g2 == pytest.approx(27.0)

    def test_one_waist_away(self, reference_params):
        k = Kinematics(v=1.0, ell=0.0)
        track = CouplingTrack(1, -13.0, CouplingKind.CAVITY)
        assert g_of_t(track, reference_params, k, 0.0) == pytest.approx(27.0 * np.exp(-1.0))

    def test_three_waists_away(self, reference_params):
        k = Kinematics(v=1.0, ell=0.0)
        track = CouplingTrack(1, -39.0, CouplingKind.CAVITY)
        assert g_of_t(track, reference_params, k, 0.0) == pytest.approx(27.0 * 1.234098e-4, rel=1e-6)

    def test_mirror_symmetry_about_crossing(self, reference_params):
        k = Kinematics(v=0.5, ell=0.0)
        couplings = coupling_set(reference_params, k)
        t_cross = k.crossing_time(reference_params.w)
        early = couplings.evaluate(reference_params, k, t_cross - 17.0)[0]
        late = couplings.evaluate(reference_params, k, t_cross + 17.0)[0]
        assert early == pytest.approx(late)

    def test_atoms_see_shifted_curves(self, reference_params):
        k = Kinematics(v=0.5, ell=6.5)
        couplings = coupling_set(reference_params, k)
        t = np.linspace(100.0, 300.0, 7)
        g1 = couplings.evaluate(reference_params, k, t)[0]
        g2 = couplings.evaluate(reference_params, k, t + 6.5 / 0.5)[1]
        np.testing.assert_allclose(g1, g2, rtol=1e-12)

    def test_zero_beyond_window(self, reference_params):
        k = Kinematics(v=1.0, ell=0.0)
        track = CouplingTrack(1, -9 * 13.0, CouplingKind.CAVITY)
        assert g_of_t(track, reference_params, k, 0.0) == 0.0

    def test_array_times_and_leading_atom(self, reference_params):
        k = Kinematics(v=1.0, ell=13.0)
        couplings = coupling_set(reference_params, k)
        t = np.linspace(*k.window(reference_params.w), 101)
        g1, g2, _, _ = couplings.evaluate(reference_params, k, t)
        assert g1.shape == (101,)
        # atom 1 leads by ell, so it peaks one waist-crossing time earlier
        assert t[np.argmax(g1)] < t[np.argmax(g2)]

    def test_laser_track_rejected(self, reference_params, toy_kinematics):
        track = CouplingTrack(1, 0.0, CouplingKind.LASER_CONSTANT)
        with pytest.raises(ValueError, match="Unsupported track kind"):
            g_of_t(track, reference_params, toy_kinematics, 0.0)


class TestLaserCoupling:
    """Test constant and gaussian laser profiles."""

    def test_constant_laser_everywhere(self, reference_params):
        k = Kinematics(v=1.0, ell=0.0)
        _, _, omega1, omega2 = coupling_set(reference_params, k).evaluate(reference_params, k, np.array([0.0, 50.0, 1e3]))
        np.testing.assert_allclose(omega1, 50.0)
        np.testing.assert_allclose(omega2, 50.0)

    def test_gaussian_laser(self):
        p = PhysicalParams(360, 380, 27, 50, 13, w_tilde=65.0, laser_profile=LaserProfile.GAUSSIAN)
        k = Kinematics(v=1.0, ell=0.0)
        track = CouplingTrack(1, -65.0, CouplingKind.LASER_GAUSSIAN)
        assert omega_of_t(track, p, k, 0.0) == pytest.approx(50.0 * np.exp(-1.0))

    def test_gaussian_laser_one_cavity_waist(self):
        p = PhysicalParams(360, 380, 27, 50, 13, w_tilde=65.0, laser_profile=LaserProfile.GAUSSIAN)
        track = CouplingTrack(1, -13.0, CouplingKind.LASER_GAUSSIAN)
        assert omega_of_t(track, p, Kinematics(v=1.0, ell=0.0), 0.0) == pytest.approx(0.9608 * 50.0, rel=1e-4)

    def test_gaussian_laser_without_waist(self):
        p = PhysicalParams(360, 380, 27, 50, 13, laser_profile=LaserProfile.GAUSSIAN)
        k = Kinematics(v=1.0, ell=0.0)
        track = CouplingTrack(1, 0.0, CouplingKind.LASER_GAUSSIAN)
        with pytest.raises(ConfigurationError) as excinfo:
            omega_of_t(track, p, k, 0.0)
        assert excinfo.value.key == "w_tilde"

    def test_coupling_set_picks_laser_kind(self):
        p = PhysicalParams(360, 380, 27, 50, 13, w_tilde=65.0, laser_profile=LaserProfile.GAUSSIAN)
        couplings = coupling_set(p, Kinematics(v=1.0, ell=0.0))
        assert couplings.laser_1.kind is CouplingKind.LASER_GAUSSIAN
        assert couplings.cavity_2.kind is CouplingKind.CAVITY


class TestCouplingProduct:
    """Test the scalar product g1·g2·Ω1·Ω2 used by quadrature."""

    @pytest.mark.parametrize("laser", [LaserProfile.CONSTANT, LaserProfile.GAUSSIAN])
    def test_matches_coupling_set(self, laser):
        p = PhysicalParams(360, 380, 27, 50, 13, w_tilde=30.0, laser_profile=laser)
        k = Kinematics(v=0.2, ell=9.0)
        couplings = coupling_set(p, k)
        product = coupling_product(p, k)
        for t in np.linspace(*k.window(p.w), 37):
            g1, g2, omega1, omega2 = couplings.evaluate(p, k, t)
            assert product(float(t)) == pytest.approx(g1 * g2 * omega1 * omega2, rel=1e-13, abs=1e-300)

    def test_zero_beyond_window(self, reference_params):
        k = Kinematics(v=0.2, ell=0.0)
        assert coupling_product(reference_params, k)(-10.0) == 0.0

    def test_gaussian_laser_without_waist(self):
        p = PhysicalParams(360, 380, 27, 50, 13, laser_profile=LaserProfile.GAUSSIAN)
        with pytest.raises(ConfigurationError, match="w_tilde"):
            coupling_product(p, Kinematics(v=0.2, ell=0.0))
