"""Unit tests for freeze detection, log-log fits and exponent extraction."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabikzm import (
    KzmError,
    ScanConfig,
    TimeSeries,
    extract_exponents,
    freeze_time,
    loglog_fit,
)
from rabikzm import analytics
from rabikzm.kzm import ScanRow, frozen_length, write_exponent_csv, write_scan_csv


def make_series(t, n_c, lam=1.0, tau_q=10.0, t_c=5.0, **overrides):
    n = len(t)
    cols = dict(
        s=(np.asarray(t) - t_c) / tau_q,
        g_tilde=np.ones(n),
        n_c=np.asarray(n_c, dtype=float),
        dx=np.linspace(1.0, 2.0, n),
        dp=np.linspace(2.0, 1.0, n),
        mean_x=np.zeros(n),
        mean_p=np.zeros(n),
        norm=np.ones(n),
        energy=np.zeros(n),
    )
    cols.update(overrides)
    return TimeSeries(lam=lam, tau_q=tau_q, t_c=t_c,
                      t=np.asarray(t, dtype=float), **cols)


class TestFreezeTime:
    def test_interpolated_crossing(self):
        t = np.linspace(0.0, 20.0, 41)
        n_c = np.where(t < 10.0, 1.0, 1.0 + (t - 10.0))  # crosses 5 at t = 14
        series = make_series(t, n_c, t_c=5.0, tau_q=10.0)
        event = freeze_time(series, n_fix=5.0)
        assert event.t_hat == pytest.approx(14.0 - 5.0)
        assert event.b_d == pytest.approx((14.0 - 5.0) / 10.0)
        assert event.length_kind == "dx"

    def test_negative_lam_uses_dp(self):
        t = np.linspace(0.0, 20.0, 41)
        n_c = np.linspace(0.0, 10.0, 41)
        series = make_series(t, n_c, lam=-1.0, t_c=1.0)
        event = freeze_time(series, n_fix=5.0)
        assert event.length_kind == "dp"
        assert event.length_at_freeze == pytest.approx(
            frozen_length(-1.0, event.b_d))

    def test_length_is_frozen_equilibrium_width(self):
        t = np.linspace(0.0, 20.0, 41)
        n_c = np.where(t < 10.0, 1.0, 1.0 + (t - 10.0))
        series = make_series(t, n_c, t_c=5.0, tau_q=10.0)
        event = freeze_time(series, n_fix=5.0)
        f = analytics.amplitude_factors(1.0)[1]
        expected = analytics.VARIANCE_PREFACTOR_NORMAL * f * event.b_d**-0.25
        assert event.length_at_freeze == pytest.approx(expected)

    def test_frozen_length_rejects_nonpositive_b_d(self):
        with pytest.raises(KzmError):
            frozen_length(1.0, 0.0)

    def test_no_crossing_raises(self):
        series = make_series(np.linspace(0, 10, 21), np.ones(21))
        with pytest.raises(KzmError):
            freeze_time(series, n_fix=5.0)

    def test_crossing_before_tc_raises(self):
        t = np.linspace(0.0, 20.0, 41)
        n_c = np.linspace(0.0, 20.0, 41)  # crosses 5 at t = 5 < t_c = 8
        series = make_series(t, n_c, t_c=8.0)
        with pytest.raises(KzmError):
            freeze_time(series, n_fix=5.0)

    def test_sparse_sampling_raises(self):
        t = np.array([0.0, 9.0, 18.0])
        n_c = np.array([0.0, 1.0, 10.0])
        series = make_series(t, n_c, t_c=5.0)
        with pytest.raises(KzmError):
            freeze_time(series, n_fix=5.0)


class TestLogLogFit:
    @given(slope=st.floats(-2.0, 2.0), amp=st.floats(0.1, 10.0))
    @settings(max_examples=40)
    def test_recovers_exact_power_law(self, slope, amp):
        x = np.logspace(0.0, 2.0, 9)
        fit = loglog_fit(np.column_stack([x, amp * x**slope]))
        assert fit.slope == pytest.approx(slope, abs=1e-9)
        assert fit.amplitude == pytest.approx(amp, rel=1e-8)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9) or abs(slope) < 1e-9

    def test_rejects_nonpositive_values(self):
        with pytest.raises(KzmError):
            loglog_fit([(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)])

    def test_rejects_too_few_points(self):
        with pytest.raises(KzmError):
            loglog_fit([(1.0, 1.0), (2.0, 2.0)])


class TestExponentExtraction:
    def test_exact_quartic_slopes(self):
        x = np.logspace(1.0, 2.5, 7)
        fit_d = loglog_fit(np.column_stack([x, 0.8 * x ** (-2.0 / 3.0)]))
        fit_l = loglog_fit(np.column_stack([x, 1.1 * x ** (1.0 / 6.0)]))
        report = extract_exponents(fit_d, fit_l, lam=1.0)
        assert report.z == pytest.approx(2.0, abs=1e-8)
        assert report.nu == pytest.approx(0.25, abs=1e-9)

    @given(nu=st.floats(0.1, 1.0), z=st.floats(0.5, 3.0))
    @settings(max_examples=30)
    def test_round_trip_through_slopes(self, nu, z):
        nuz = nu * z
        x = np.logspace(0.5, 2.0, 8)
        fit_d = loglog_fit(np.column_stack([x, x ** (-1.0 / (1.0 + nuz))]))
        fit_l = loglog_fit(np.column_stack([x, x ** (nu / (1.0 + nuz))]))
        report = extract_exponents(fit_d, fit_l)
        assert report.nu == pytest.approx(nu, rel=1e-6)
        assert report.z == pytest.approx(z, rel=1e-6)

    def test_rejects_positive_delay_slope(self):
        x = np.logspace(0.0, 1.0, 5)
        fit_up = loglog_fit(np.column_stack([x, x]))
        with pytest.raises(KzmError):
            extract_exponents(fit_up, fit_up)


class TestScanPlumbing:
    def test_config_grid(self):
        cfg = ScanConfig(n_points=512, half_width=32.0)
        grid = cfg.grid()
        assert grid.n_points == 512 and grid.half_width == 32.0

    def test_scan_csv_includes_failures(self, tmp_path):
        from rabikzm import FreezeEvent

        rows = [
            ScanRow(lam=1.0, tau_q=10.0,
                    event=FreezeEvent(t_hat=2.0, s_hat=0.2, b_d=0.2,
                                      length_at_freeze=1.5, length_kind="dx")),
            ScanRow(lam=1.0, tau_q=20.0, error="norm drift, at t=3"),
        ]
        path = tmp_path / "scan.csv"
        write_scan_csv(rows, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert "error:norm drift; at t=3" in lines[2]

    def test_exponent_csv_round_trip(self, tmp_path):
        x = np.logspace(1.0, 2.5, 7)
        fit_d = loglog_fit(np.column_stack([x, x ** (-2.0 / 3.0)]))
        fit_l = loglog_fit(np.column_stack([x, x ** (1.0 / 6.0)]))
        report = extract_exponents(fit_d, fit_l, lam=1.0)
        path = tmp_path / "exp.csv"
        write_exponent_csv({1.0: report}, path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        assert float(data["z"]) == pytest.approx(2.0, abs=1e-6)
        assert float(data["nu"]) == pytest.approx(0.25, abs=1e-6)
