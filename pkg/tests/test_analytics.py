"""Unit tests for the closed-form equilibrium and scaling expressions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabikzm import (
    AnalyticsError,
    Grid,
    ModelParams,
    PhaseLabel,
    amplitude_factors,
    critical_coupling,
    displacement,
    effective_oscillator,
    excitation_gap,
    kz_prediction,
    normal_ground_profile,
    phase_of,
    variances,
)
from rabikzm.analytics import (
    GAP_PREFACTOR_NORMAL,
    GAP_PREFACTOR_SUPER,
    VARIANCE_PREFACTOR_NORMAL,
    VARIANCE_PREFACTOR_SUPER,
)
from rabikzm.model import inner


class TestPhases:
    def test_critical_coupling_values(self):
        assert critical_coupling(1.0) == pytest.approx(1.0)
        assert critical_coupling(0.0) == pytest.approx(2.0)
        assert critical_coupling(-3.0) == pytest.approx(0.5)

    def test_phase_classification(self, normal_params, super_x_params, super_p_params):
        assert phase_of(normal_params) is PhaseLabel.NORMAL
        assert phase_of(super_x_params) is PhaseLabel.SUPERRADIANT_X
        assert phase_of(super_p_params) is PhaseLabel.SUPERRADIANT_P

    def test_lam_zero_superradiant_rejected(self):
        with pytest.raises(AnalyticsError):
            phase_of(ModelParams(lam=0.0, g_tilde=2.5))


class TestGap:
    def test_gap_closes_at_critical_point(self):
        for lam in (1.0, -1.0, 0.5):
            g_c = critical_coupling(lam)
            assert excitation_gap(
                ModelParams(lam=lam, g_tilde=g_c)) == pytest.approx(0.0, abs=1e-12)

    def test_gap_at_zero_coupling_is_omega(self):
        p = ModelParams(lam=1.0, g_tilde=0.0, omega=0.7)
        assert excitation_gap(p) == pytest.approx(0.7)

    @given(lam=st.floats(0.1, 3.0), eps=st.floats(1e-3, 0.5))
    @settings(max_examples=40, deadline=None)
    def test_gap_mirror_symmetry_in_lam(self, lam, eps):
        # +-lam swap x and p but the gap is the same on each side
        for side in (1.0 - eps, 1.0 + eps):
            g = side * critical_coupling(lam)
            gp = excitation_gap(ModelParams(lam=lam, g_tilde=g))
            gm = excitation_gap(ModelParams(lam=-lam, g_tilde=g))
            assert gp == pytest.approx(gm, rel=1e-10)

    def test_near_critical_square_root_law(self):
        lam = 0.5
        g_c = critical_coupling(lam)
        f_gap, _ = amplitude_factors(lam)
        for eps in (1e-5, 1e-6):
            gap = excitation_gap(ModelParams(lam=lam, g_tilde=(1 - eps) * g_c))
            assert gap == pytest.approx(
                GAP_PREFACTOR_NORMAL * f_gap * math.sqrt(eps), rel=5e-3)
            gap_s = excitation_gap(ModelParams(lam=lam, g_tilde=(1 + eps) * g_c))
            assert gap_s == pytest.approx(
                GAP_PREFACTOR_SUPER * f_gap * math.sqrt(eps), rel=5e-3)


class TestDisplacement:
    def test_zero_in_normal_phase(self, normal_params):
        assert displacement(normal_params) == 0.0

    def test_mirror_pair_matches(self):
        dx = displacement(ModelParams(lam=1.5, g_tilde=1.1, Omega=100.0))
        dp = displacement(ModelParams(lam=-1.5, g_tilde=1.1, Omega=100.0))
        assert dx == pytest.approx(dp, rel=1e-12)

    def test_grows_with_Omega(self):
        d1 = displacement(ModelParams(lam=1.0, g_tilde=1.3, Omega=100.0))
        d2 = displacement(ModelParams(lam=1.0, g_tilde=1.3, Omega=400.0))
        assert d2 == pytest.approx(2.0 * d1, rel=1e-12)


class TestEffectiveOscillator:
    def test_width_consistency(self, super_x_params):
        osc = effective_oscillator(super_x_params)
        assert osc.width == pytest.approx(math.sqrt(osc.mass * osc.gap))

    def test_normal_phase_is_undressed(self, normal_params):
        osc = effective_oscillator(normal_params)
        assert osc.dressed_frequency == normal_params.Omega
        assert osc.mixing_angle == 0.0

    def test_dressed_frequency_limit(self):
        # deep superradiant at large Omega: Omega-tilde -> Omega xi^2
        p = ModelParams(lam=1.0, g_tilde=1.5, Omega=1e6)
        osc = effective_oscillator(p)
        assert osc.dressed_frequency == pytest.approx(p.Omega * p.xi**2, rel=1e-3)


class TestVariances:
    def test_rejects_critical_point(self):
        with pytest.raises(AnalyticsError):
            variances(ModelParams(lam=1.0, g_tilde=1.0))

    def test_decoupled_limit_is_vacuum(self):
        dx, dp = variances(ModelParams(lam=1.0, g_tilde=1e-8, Omega=1e8))
        assert dx == pytest.approx(math.sqrt(0.5), rel=1e-6)
        assert dp == pytest.approx(math.sqrt(0.5), rel=1e-6)

    def test_mirror_pair_swaps_x_and_p(self):
        for g in (0.7, 1.2):
            dx_p, dp_p = variances(ModelParams(lam=0.8, g_tilde=g, Omega=1e5))
            dx_m, dp_m = variances(ModelParams(lam=-0.8, g_tilde=g, Omega=1e5))
            assert dx_p == pytest.approx(dp_m, rel=1e-10)
            assert dp_p == pytest.approx(dx_m, rel=1e-10)

    def test_near_critical_divergence_law(self):
        lam = 1.0
        _, f = amplitude_factors(lam)
        for eps in (1e-6, 1e-7):
            dx, _ = variances(ModelParams(lam=lam, g_tilde=1.0 - eps, Omega=1e9))
            assert dx == pytest.approx(
                VARIANCE_PREFACTOR_NORMAL * f * eps**-0.25, rel=2e-3)
            dx_s, _ = variances(ModelParams(lam=lam, g_tilde=1.0 + eps, Omega=1e9))
            assert dx_s == pytest.approx(
                VARIANCE_PREFACTOR_SUPER * f * eps**-0.25, rel=2e-3)


class TestAmplitudeFactors:
    def test_internal_consistency(self):
        # the variance factor is the fourth root of the gap factor's bracket
        for lam in (0.3, 1.0, 2.5):
            f_gap, f = amplitude_factors(lam, omega=1.0)
            assert f**2 == pytest.approx(f_gap, rel=1e-12)

    def test_lam_one_values(self):
        f_gap, f = amplitude_factors(1.0)
        assert f_gap == pytest.approx(1.0)
        assert f == pytest.approx(1.0)

    def test_rejects_lam_zero(self):
        with pytest.raises(AnalyticsError):
            amplitude_factors(0.0)


class TestNormalProfile:
    def test_profile_matches_relaxed_state(self, normal_params):
        from rabikzm import ground_state

        grid = Grid(half_width=16.0, n_points=256)
        profile = normal_ground_profile(normal_params, grid)
        relaxed = ground_state(normal_params, grid, tol=1e-10).state
        overlap = abs(inner(profile, relaxed, grid))
        assert overlap > 0.999

    def test_rejects_superradiant(self, super_x_params):
        with pytest.raises(AnalyticsError):
            normal_ground_profile(super_x_params, Grid())


class TestKzPrediction:
    def test_quartic_exponents(self):
        pred = kz_prediction(nu=0.25, z=2.0)
        assert pred.slope_delay == pytest.approx(-2.0 / 3.0)
        assert pred.slope_length == pytest.approx(1.0 / 6.0)
        assert pred.slope_freeze == pytest.approx(1.0 / 3.0)

    @given(nu=st.floats(0.05, 2.0), z=st.floats(0.1, 4.0))
    @settings(max_examples=40)
    def test_slope_identities(self, nu, z):
        pred = kz_prediction(nu, z)
        # the three slopes satisfy slope_freeze = -nu z slope_delay and
        # slope_length = nu slope_freeze / (nu z)
        assert pred.slope_freeze == pytest.approx(-nu * z * pred.slope_delay)
        assert pred.slope_length == pytest.approx(pred.slope_freeze / z)
