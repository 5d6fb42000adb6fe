"""Kibble-Zurek observables: freeze events, power-law fits, exponents, scans.

The freeze time is detected as the first crossing of the phonon number above
a threshold after the ramp passes the critical point; the phase transition
delay is b_d = |s(t_hat)| at the interpolated crossing.  The frozen length
scale (Delta x for lam > 0, Delta p for lam < 0) is the equilibrium width at
the freeze-out distance, zeta(b_d): the dynamical width exactly at the
crossing is kinematically pinned near sqrt(2 n_fix / omega) (since
Delta x^2 + Delta p^2 <= 2 n_c / omega with symmetric first moments) and
carries no scaling information.  Log-log fits of b_d and the length against
tau_Q recover (nu, z).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.stats

from . import analytics, solver
from .dynamics import (DynamicsError, QuenchSchedule, TimeSeries, evolve,
                       evolve_batch)
from .model import Grid, ModelParams

N_FIX_DEFAULT = 5.0

SCAN_COLUMNS = ("lambda", "tau_q", "t_hat", "b_d", "length_at_freeze", "length_kind")
EXPONENT_COLUMNS = ("lambda", "z", "z_err", "nu", "nu_err", "slope_delay",
                    "slope_length", "r2_delay", "r2_length")


class KzmError(RuntimeError):
    """Freeze detection or fitting failure."""


@dataclass(frozen=True)
class FreezeEvent:
    t_hat: float  # time since t_c
    s_hat: float  # signed distance at the crossing
    b_d: float  # |s_hat|
    length_at_freeze: float  # frozen equilibrium width zeta(b_d)
    length_kind: str  # "dx" or "dp"


def frozen_length(lam: float, b_d: float, omega: float = 1.0) -> float:
    """Scaling-regime equilibrium width at the freeze-out distance b_d.

    zeta(eps) = 2^(-3/4) f(lam) |eps|^(-1/4) is the near-critical width of
    the quadrature that diverges (Delta x for lam > 0, Delta p for lam < 0);
    evaluating it at eps = b_d gives the frozen length the quench carries
    through the impulse region.
    """
    if b_d <= 0:
        raise KzmError("b_d must be positive")
    _, f = analytics.amplitude_factors(lam, omega)
    return analytics.VARIANCE_PREFACTOR_NORMAL * f * b_d**-0.25


def freeze_time(series: TimeSeries, n_fix: float = N_FIX_DEFAULT) -> FreezeEvent:
    """First crossing of n_c above n_fix after the critical point.

    Linearly interpolates between the bracketing samples for the crossing
    instant; length_at_freeze is the frozen equilibrium width zeta(b_d).
    """
    t, n_c = series.t, series.n_c
    if t.size < 2:
        raise KzmError("series too short for freeze detection")
    above = n_c >= n_fix
    crossings = np.flatnonzero(~above[:-1] & above[1:])
    if crossings.size == 0:
        raise KzmError(f"n_c never crosses {n_fix}: run too short")
    i = int(crossings[0])
    frac = (n_fix - n_c[i]) / (n_c[i + 1] - n_c[i])
    t_cross = t[i] + frac * (t[i + 1] - t[i])
    if t_cross <= series.t_c:
        raise KzmError("n_c crosses the threshold before the critical point")
    n_before = np.count_nonzero((t > series.t_c) & (t < t_cross))
    if n_before < 10:
        raise KzmError("fewer than 10 samples between t_c and the crossing")

    def interp(col: np.ndarray) -> float:
        return float(col[i] + frac * (col[i + 1] - col[i]))

    s_hat = interp(series.s)
    kind = "dx" if series.lam > 0 else "dp"
    return FreezeEvent(
        t_hat=t_cross - series.t_c,
        s_hat=s_hat,
        b_d=abs(s_hat),
        length_at_freeze=frozen_length(series.lam, abs(s_hat)),
        length_kind=kind,
    )


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float  # log10-log10
    slope_stderr: float
    r_squared: float
    n_points: int

    @property
    def amplitude(self) -> float:
        """10**intercept, the fitted prefactor."""
        return 10.0**self.intercept


def loglog_fit(points) -> ScalingFit:
    """Ordinary least squares on (log10 x, log10 y)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise KzmError("at least 3 points are required")
    if np.any(pts <= 0):
        raise KzmError("all coordinates must be positive for a log-log fit")
    res = scipy.stats.linregress(np.log10(pts[:, 0]), np.log10(pts[:, 1]))
    return ScalingFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        slope_stderr=float(res.stderr),
        r_squared=float(res.rvalue**2),
        n_points=pts.shape[0],
    )


@dataclass(frozen=True)
class ExponentReport:
    lam: float
    z: float
    nu: float
    z_err: float
    nu_err: float
    fit_delay: ScalingFit
    fit_length: ScalingFit
    z_target: float = 2.0
    nu_target: float = 0.25


def extract_exponents(fit_delay: ScalingFit, fit_length: ScalingFit,
                      lam: float = math.nan) -> ExponentReport:
    """Recover (nu, z) from the delay and length slopes.

    slope_delay = -1/(1+nu z) and slope_length = nu/(1+nu z), hence
    nu z = -1/slope_delay - 1, nu = slope_length (1 + nu z), z = nu z / nu.
    Standard errors are propagated to first order (cross-correlation between
    the two independent fits is zero).
    """
    m_d, m_l = fit_delay.slope, fit_length.slope
    if m_d >= 0:
        raise KzmError("non-physical delay slope (must be negative)")
    nuz = -1.0 / m_d - 1.0
    nu = m_l * (1.0 + nuz)
    if nu <= 0:
        raise KzmError("non-physical nu <= 0")
    z = nuz / nu
    d_nuz = fit_delay.slope_stderr / m_d**2
    nu_err = math.hypot((1.0 + nuz) * fit_length.slope_stderr, m_l * d_nuz)
    z_err = math.hypot(d_nuz / nu, nuz * nu_err / nu**2)
    return ExponentReport(lam=lam, z=z, nu=nu, z_err=z_err, nu_err=nu_err,
                          fit_delay=fit_delay, fit_length=fit_length)


@dataclass(frozen=True)
class ScanConfig:
    """Full (lambda, tau_Q) scan specification."""

    lambdas: tuple[float, ...] = (-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0)
    tau_qs: tuple[float, ...] = tuple(np.logspace(1.0, 2.5, 7))
    omega: float = 1.0
    Omega: float = 1000.0
    half_width: float = 48.0
    n_points: int = 1024
    dt: float | None = None
    observer_stride: int = 100
    eps_start: float = -1.0
    eps_end: float = 1.0
    n_fix: float = N_FIX_DEFAULT
    stop_factor: float = 3.0  # early stop at stop_factor * n_fix; 0 disables
    workers: int = 1
    keep_series: bool = False

    def grid(self) -> Grid:
        return Grid(half_width=self.half_width, n_points=self.n_points)


@dataclass
class ScanRow:
    lam: float
    tau_q: float
    event: FreezeEvent | None = None
    error: str | None = None
    series: TimeSeries | None = None


@dataclass
class ScanResult:
    rows: list[ScanRow]
    reports: dict[float, ExponentReport]
    fit_errors: dict[float, str]

    @property
    def ok(self) -> bool:
        return not self.fit_errors and all(r.error is None for r in self.rows)


def run_one(config: ScanConfig, lam: float, tau_q: float,
            initial=None) -> ScanRow:
    """One quench run: relax the initial ground state, evolve, detect freeze."""
    grid = config.grid()
    schedule = QuenchSchedule(
        lam=lam, tau_q=tau_q, omega=config.omega, Omega=config.Omega,
        eps_start=config.eps_start, eps_end=config.eps_end,
    )
    try:
        if initial is None:
            initial = solver.ground_state(schedule.params_at(0.0), grid).state
        stop = config.stop_factor * config.n_fix if config.stop_factor > 0 else None
        series, _ = evolve(
            schedule, grid, initial,
            dt=config.dt, observer_stride=config.observer_stride,
            stop_n_c=stop,
        )
        event = freeze_time(series, config.n_fix)
    except (DynamicsError, KzmError, solver.SolverError) as exc:
        return ScanRow(lam=lam, tau_q=tau_q, error=str(exc))
    return ScanRow(lam=lam, tau_q=tau_q, event=event,
                   series=series if config.keep_series else None)


def _worker(args) -> ScanRow:
    config, lam, tau_q = args
    return run_one(config, lam, tau_q)


def run_scan(config: ScanConfig) -> ScanResult:
    """Parallel map over (lambda, tau_Q) pairs plus per-lambda fits.

    Per-run failures are recorded on their rows; fitting proceeds with the
    surviving rows.  Output ordering is sorted by (lambda, tau_Q) and
    independent of the worker count.
    """
    tasks = [(config, lam, tau_q)
             for lam in sorted(config.lambdas) for tau_q in sorted(config.tau_qs)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_worker, tasks))
    else:
        # single-process path: relax each lambda's initial state once, then
        # propagate all lambdas of one tau_Q in lock step (numerically
        # identical to run-by-run evolution, just amortized)
        grid = config.grid()
        stop = config.stop_factor * config.n_fix if config.stop_factor > 0 else None
        initial_cache: dict[float, object] = {}
        seed_errors: dict[float, str] = {}
        for lam in sorted(config.lambdas):
            g0 = 2.0 / (1.0 + abs(lam)) * (1.0 + config.eps_start)
            params0 = ModelParams(lam=lam, g_tilde=g0, omega=config.omega,
                                  Omega=config.Omega)
            try:
                initial_cache[lam] = solver.ground_state(params0, grid).state
            except solver.SolverError as exc:
                seed_errors[lam] = str(exc)
        rows = []
        for tau_q in sorted(config.tau_qs):
            lams = [lam for lam in sorted(config.lambdas) if lam in initial_cache]
            for lam in sorted(config.lambdas):
                if lam in seed_errors:
                    rows.append(ScanRow(lam=lam, tau_q=tau_q,
                                        error=seed_errors[lam]))
            schedules = [
                QuenchSchedule(lam=lam, tau_q=tau_q, omega=config.omega,
                               Omega=config.Omega, eps_start=config.eps_start,
                               eps_end=config.eps_end)
                for lam in lams
            ]
            outcomes = evolve_batch(
                schedules, grid, [initial_cache[lam] for lam in lams],
                dt=config.dt, observer_stride=config.observer_stride,
                stop_n_c=stop,
            )
            for lam, out in zip(lams, outcomes):
                if isinstance(out, DynamicsError):
                    rows.append(ScanRow(lam=lam, tau_q=tau_q, error=str(out)))
                    continue
                try:
                    event = freeze_time(out, config.n_fix)
                except KzmError as exc:
                    rows.append(ScanRow(lam=lam, tau_q=tau_q, error=str(exc)))
                    continue
                rows.append(ScanRow(lam=lam, tau_q=tau_q, event=event,
                                    series=out if config.keep_series else None))
    rows.sort(key=lambda r: (r.lam, r.tau_q))

    reports: dict[float, ExponentReport] = {}
    fit_errors: dict[float, str] = {}
    for lam in sorted(config.lambdas):
        good = [r for r in rows if r.lam == lam and r.event is not None]
        try:
            fit_d = loglog_fit([(r.tau_q, r.event.b_d) for r in good])
            fit_l = loglog_fit([(r.tau_q, r.event.length_at_freeze) for r in good])
            reports[lam] = extract_exponents(fit_d, fit_l, lam=lam)
        except KzmError as exc:
            fit_errors[lam] = str(exc)
    return ScanResult(rows=rows, reports=reports, fit_errors=fit_errors)


def write_scan_csv(rows: list[ScanRow], path) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(SCAN_COLUMNS) + "\n")
        for r in rows:
            if r.event is None:
                fh.write(f"{r.lam:.12g},{r.tau_q:.12g},nan,nan,nan,"
                         f"error:{(r.error or '').replace(',', ';')}\n")
            else:
                e = r.event
                fh.write(
                    f"{r.lam:.12g},{r.tau_q:.12g},{e.t_hat:.12g},{e.b_d:.12g},"
                    f"{e.length_at_freeze:.12g},{e.length_kind}\n"
                )


def write_exponent_csv(reports: dict[float, ExponentReport], path) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(EXPONENT_COLUMNS) + "\n")
        for lam in sorted(reports):
            r = reports[lam]
            fh.write(
                f"{lam:.12g},{r.z:.12g},{r.z_err:.12g},{r.nu:.12g},{r.nu_err:.12g},"
                f"{r.fit_delay.slope:.12g},{r.fit_length.slope:.12g},"
                f"{r.fit_delay.r_squared:.12g},{r.fit_length.r_squared:.12g}\n"
            )
