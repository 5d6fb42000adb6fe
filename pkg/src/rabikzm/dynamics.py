"""Real-time quench dynamics and observable time series.

The coupling is ramped linearly through the critical point,

    g(t) = g_c (1 + s(t)),   s(t) = eps_start + t / tau_Q,

so s crosses zero at t_c = -eps_start * tau_Q and |s(t)| is the
dimensionless distance from the critical point.  Propagation is second-order
Strang splitting with both couplings evaluated at the step midpoint; every
substep is unitary, so the norm is conserved to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Grid, ModelError, ModelParams, SpinorState, apply_hamiltonian
from .propagator import Stepper, spin_placement

TIMESERIES_COLUMNS = ("t", "s", "g_tilde", "n_c", "dx", "dp",
                      "mean_x", "mean_p", "norm", "energy")

NORM_DRIFT_LIMIT = 1e-8
BOUNDARY_MASS_LIMIT = 1e-6


class DynamicsError(RuntimeError):
    """Stability violation or grid overflow during propagation."""


@dataclass(frozen=True)
class QuenchSchedule:
    """Linear ramp of the coupling across the critical point."""

    lam: float
    tau_q: float
    omega: float = 1.0
    Omega: float = 1000.0
    eps_start: float = -1.0
    eps_end: float = 1.0

    def __post_init__(self):
        if self.tau_q <= 0:
            raise ModelError("tau_q must be positive")
        if not (self.eps_start < 0.0 < self.eps_end):
            raise ModelError("the ramp must cross the critical point")
        if self.eps_start < -1.0:
            raise ModelError("eps_start < -1 would make g_tilde negative")

    @property
    def g_c(self) -> float:
        return 2.0 / (1.0 + abs(self.lam))

    @property
    def t_c(self) -> float:
        return -self.eps_start * self.tau_q

    @property
    def t_end(self) -> float:
        return (self.eps_end - self.eps_start) * self.tau_q

    def s_at(self, t: float) -> float:
        return self.eps_start + t / self.tau_q

    def g_at(self, t: float) -> float:
        return self.g_c * (1.0 + self.s_at(t))

    def params_at(self, t: float) -> ModelParams:
        return ModelParams(lam=self.lam, g_tilde=self.g_at(t),
                           omega=self.omega, Omega=self.Omega)

    def default_dt(self) -> float:
        """Resolve the stiffest frequency (Omega) by 20 substeps per period."""
        return 2.0 * math.pi / (20.0 * self.Omega)


@dataclass
class Observables:
    n_c: float
    dx: float
    dp: float
    mean_x: float
    mean_p: float
    norm: float
    energy: float


def observe(state: SpinorState, grid: Grid, params: ModelParams) -> Observables:
    """Observable record: phonon number n_c = <omega (p^2+x^2)/2>, variances,
    first moments, norm and <H>."""
    dens = np.abs(state.psi_up) ** 2 + np.abs(state.psi_down) ** 2
    w_tot = float(dens.sum())
    x = grid.x
    mean_x = float((dens * x).sum()) / w_tot
    mean_x2 = float((dens * x**2).sum()) / w_tot

    phi = np.fft.fft(state.as_array(), axis=1)
    pdens = np.abs(phi[0]) ** 2 + np.abs(phi[1]) ** 2
    p_tot = float(pdens.sum())
    k = grid.k
    mean_p = float((pdens * k).sum()) / p_tot
    mean_p2 = float((pdens * k**2).sum()) / p_tot

    norm = math.sqrt(grid.dx * w_tot)
    hpsi = apply_hamiltonian(params, state, grid)
    energy = float(
        grid.dx
        * (np.vdot(state.psi_up, hpsi.psi_up) + np.vdot(state.psi_down, hpsi.psi_down)).real
    ) / norm**2
    return Observables(
        n_c=0.5 * params.omega * (mean_x2 + mean_p2),
        dx=math.sqrt(max(mean_x2 - mean_x**2, 0.0)),
        dp=math.sqrt(max(mean_p2 - mean_p**2, 0.0)),
        mean_x=mean_x,
        mean_p=mean_p,
        norm=norm,
        energy=energy,
    )


@dataclass
class TimeSeries:
    """Sampled observables from one evolution, plus run metadata."""

    lam: float
    tau_q: float
    t_c: float
    t: np.ndarray
    s: np.ndarray
    g_tilde: np.ndarray
    n_c: np.ndarray
    dx: np.ndarray
    dp: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    norm: np.ndarray
    energy: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def to_csv(self, path) -> None:
        rows = np.column_stack([self.column(c) for c in TIMESERIES_COLUMNS])
        with open(path, "w") as fh:
            fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")

    @staticmethod
    def from_csv(path, lam: float = math.nan, tau_q: float = math.nan,
                 t_c: float = math.nan) -> "TimeSeries":
        data = np.genfromtxt(path, delimiter=",", names=True)
        cols = {c: np.atleast_1d(data[c]) for c in TIMESERIES_COLUMNS}
        return TimeSeries(lam=lam, tau_q=tau_q, t_c=t_c, **cols)


def _series_from_records(schedule: QuenchSchedule, records) -> TimeSeries:
    t_arr = np.array([t for t, _ in records])
    return TimeSeries(
        lam=schedule.lam,
        tau_q=schedule.tau_q,
        t_c=schedule.t_c,
        t=t_arr,
        s=schedule.eps_start + t_arr / schedule.tau_q,
        g_tilde=schedule.g_c * (1.0 + schedule.eps_start + t_arr / schedule.tau_q),
        n_c=np.array([o.n_c for _, o in records]),
        dx=np.array([o.dx for _, o in records]),
        dp=np.array([o.dp for _, o in records]),
        mean_x=np.array([o.mean_x for _, o in records]),
        mean_p=np.array([o.mean_p for _, o in records]),
        norm=np.array([o.norm for _, o in records]),
        energy=np.array([o.energy for _, o in records]),
    )


def evolve_batch(
    schedules: list[QuenchSchedule],
    grid: Grid,
    initial_states: list[SpinorState],
    dt: float | None = None,
    observer_stride: int = 100,
    stop_n_c: float | None = None,
) -> list[TimeSeries | DynamicsError]:
    """Propagate several quench runs in lock step on shared arrays.

    All schedules must share omega and Omega (they may differ in lam, tau_q
    and the ramp window).  Numerically identical to calling evolve run by
    run; batching only amortizes the per-step numpy overhead.  A run that
    fails a stability check is dropped from the batch and its slot holds the
    DynamicsError instead of a TimeSeries.
    """
    if not schedules:
        return []
    omega, Omega = schedules[0].omega, schedules[0].Omega
    if any(s.omega != omega or s.Omega != Omega for s in schedules):
        raise ModelError("batched runs must share omega and Omega")
    if dt is None:
        dt = schedules[0].default_dt()
    stepper = Stepper(grid, omega, Omega, dt, imaginary=False)
    coupling = math.sqrt(Omega * omega / 2.0)
    x = grid.x
    k = grid.k
    dx = grid.dx
    n = grid.n_points
    h0 = 0.5 * Omega
    px_half = stepper._px_half
    pk_full = stepper._pk_full
    vx = 0.5 * omega * x**2
    kin = 0.5 * omega * k**2
    edge = 3

    n_runs = len(schedules)
    psi = np.empty((n_runs, 2, n), dtype=complex)
    for i, st in enumerate(initial_states):
        psi[i] = st.normalized(grid).as_array()
    active = np.arange(n_runs)  # run index per compact slot
    n_steps = np.array([int(math.ceil(s.t_end / dt)) for s in schedules])
    results: list[TimeSeries | DynamicsError | None] = [None] * n_runs
    records: list[list] = [[] for _ in range(n_runs)]

    gc_a = np.array([s.g_c for s in schedules])
    es_a = np.array([s.eps_start for s in schedules])
    itau_a = np.array([1.0 / s.tau_q for s in schedules])
    tend_a = np.array([s.t_end for s in schedules])
    lp_a = np.array([(1.0 + s.lam) / 2.0 for s in schedules])
    lm_a = np.array([(1.0 - s.lam) / 2.0 for s in schedules])
    # spin term rides with the dominant coupling, per run
    h0x_a = np.where(np.abs(lp_a) >= np.abs(lm_a), h0, 0.0)
    h0p_a = h0 - h0x_a
    x2 = x**2
    k2 = k**2

    def sample(step: int) -> None:
        nonlocal active, psi
        t = step * dt
        dens = np.abs(psi[:, 0]) ** 2 + np.abs(psi[:, 1]) ** 2
        phi = np.fft.fft(psi, axis=2)
        pdens = np.abs(phi[:, 0]) ** 2 + np.abs(phi[:, 1]) ** 2
        w_tot = dens.sum(axis=1)
        p_tot = pdens.sum(axis=1)
        mean_x = dens @ x / w_tot
        mean_x2 = dens @ x2 / w_tot
        mean_p = pdens @ k / p_tot
        mean_p2 = pdens @ k2 / p_tot
        norm = np.sqrt(dx * w_tot)
        edge_mass = dx * (dens[:, :edge].sum(axis=1) + dens[:, -edge:].sum(axis=1))
        # <H(t)>: position terms in x space, momentum terms via Parseval;
        # clamp to each run's ramp end so the final partial step matches
        # the single-run sampler
        t_run_a = np.minimum(t, tend_a[active])
        g_now = gc_a[active] * (1.0 + es_a[active] + t_run_a * itau_a[active])
        cxi = coupling * g_now * lp_a[active]
        cxp = coupling * g_now * lm_a[active]
        cross = np.real(np.conj(psi[:, 0]) * psi[:, 1]).sum(axis=1)
        sz_dens = np.abs(psi[:, 0]) ** 2 - np.abs(psi[:, 1]) ** 2
        e_pos = dens @ vx + Omega * cross + cxi * (sz_dens @ x)
        im_cross = np.imag(np.conj(phi[:, 0]) * phi[:, 1])
        e_mom = pdens @ kin + cxp * (2.0 * (im_cross @ k))
        energy = (dx * e_pos + (dx / n) * e_mom) / norm**2

        keep = []
        on_stride = step % observer_stride == 0
        for j, run in enumerate(active):
            # only record runs that are due, so a run finishing off-stride
            # does not inject extra samples into the others
            if not (on_stride or step >= n_steps[run]):
                keep.append(j)
                continue
            t_run = min(t, schedules[run].t_end)
            obs = Observables(
                n_c=0.5 * omega * (mean_x2[j] + mean_p2[j]),
                dx=math.sqrt(max(mean_x2[j] - mean_x[j] ** 2, 0.0)),
                dp=math.sqrt(max(mean_p2[j] - mean_p[j] ** 2, 0.0)),
                mean_x=float(mean_x[j]),
                mean_p=float(mean_p[j]),
                norm=float(norm[j]),
                energy=float(energy[j]),
            )
            if abs(obs.norm - 1.0) > NORM_DRIFT_LIMIT:
                results[run] = DynamicsError(f"norm drift at t={t_run:.4g}")
                continue
            if edge_mass[j] > BOUNDARY_MASS_LIMIT:
                results[run] = DynamicsError(
                    f"density reached the grid boundary at t={t_run:.4g}")
                continue
            records[run].append((t_run, obs))
            finished = step >= n_steps[run]
            if (
                stop_n_c is not None
                and t_run > schedules[run].t_c
                and obs.n_c >= stop_n_c
            ):
                finished = True
            if finished:
                results[run] = _series_from_records(schedules[run], records[run])
            else:
                keep.append(j)
        if len(keep) != len(active):
            active = active[keep]
            psi = psi[keep]

    sample(0)
    step = 0
    while active.size:
        t_mid = (step + 0.5) * dt
        g_mid = gc_a[active] * (1.0 + es_a[active] + t_mid * itau_a[active])
        cxi = (coupling * g_mid * lp_a[active])[:, None]
        cxp = coupling * g_mid * lm_a[active]

        hx = h0x_a[active][:, None]
        hz = cxi * x
        r = np.sqrt(hx**2 + hz**2)
        rs = np.where(r > 0.0, r, 1.0)
        e = np.exp((0.5j * dt) * r)
        sa = e.imag / rs
        pc = px_half * e.real
        psz = px_half * (1j * sa)
        u00 = pc - psz * hz
        u11 = pc + psz * hz
        u01 = psz * (-hx)

        up = u00 * psi[:, 0] + u01 * psi[:, 1]
        dn = u01 * psi[:, 0] + u11 * psi[:, 1]
        phi = np.fft.fft(np.stack([up, dn], axis=1), axis=2)
        hp = h0p_a[active][:, None]
        hy = cxp[:, None] * k
        rp = np.sqrt(hp**2 + hy**2)
        rps = np.where(rp > 0.0, rp, 1.0)
        ep = np.exp((1j * dt) * rp)
        sp = ep.imag / rps
        ct = pk_full * ep.real
        o01 = pk_full * (-1j * sp * hp - sp * hy)
        o10 = pk_full * (-1j * sp * hp + sp * hy)
        f0 = ct * phi[:, 0] + o01 * phi[:, 1]
        f1 = o10 * phi[:, 0] + ct * phi[:, 1]
        cur = np.fft.ifft(np.stack([f0, f1], axis=1), axis=2)
        psi[:, 0] = u00 * cur[:, 0] + u01 * cur[:, 1]
        psi[:, 1] = u01 * cur[:, 0] + u11 * cur[:, 1]

        step += 1
        if step % observer_stride == 0 or np.any(step >= n_steps[active]):
            # strided sample, or a run just reached its own final step
            sample(step)
    return [r if r is not None else DynamicsError("run never sampled")
            for r in results]


def evolve_static(
    params: ModelParams,
    grid: Grid,
    initial_state: SpinorState,
    t_total: float,
    dt: float | None = None,
    observer_stride: int = 100,
) -> TimeSeries:
    """Propagate under a fixed Hamiltonian (tau_Q -> infinity control run)."""
    if dt is None:
        dt = 2.0 * math.pi / (20.0 * params.Omega)
    n_steps = int(math.ceil(t_total / dt))
    stepper = Stepper(grid, params.omega, params.Omega, dt, imaginary=False,
                      spin_in=spin_placement(params.xi, params.xi_prime))
    psi = initial_state.normalized(grid).as_array()
    xk = stepper.x_kernel(params.xi)
    pk = stepper.p_kernel(params.xi_prime)
    records = [(0.0, observe(initial_state, grid, params))]
    for step in range(n_steps):
        stepper.apply_x(psi, xk)
        stepper.apply_p(psi, pk)
        stepper.apply_x(psi, xk)
        done = step + 1
        if done % observer_stride == 0 or done == n_steps:
            t = done * dt
            obs = observe(SpinorState(psi[0], psi[1]), grid, params)
            if abs(obs.norm - 1.0) > NORM_DRIFT_LIMIT:
                raise DynamicsError(f"norm drift at t={t:.4g}")
            records.append((t, obs))
    t_arr = np.array([t for t, _ in records])
    const = np.full_like(t_arr, params.g_tilde)
    return TimeSeries(
        lam=params.lam,
        tau_q=math.inf,
        t_c=math.inf,
        t=t_arr,
        s=np.full_like(t_arr, (params.g_tilde - params.g_c) / params.g_c),
        g_tilde=const,
        n_c=np.array([o.n_c for _, o in records]),
        dx=np.array([o.dx for _, o in records]),
        dp=np.array([o.dp for _, o in records]),
        mean_x=np.array([o.mean_x for _, o in records]),
        mean_p=np.array([o.mean_p for _, o in records]),
        norm=np.array([o.norm for _, o in records]),
        energy=np.array([o.energy for _, o in records]),
    )


def evolve(
    schedule: QuenchSchedule,
    grid: Grid,
    initial_state: SpinorState,
    dt: float | None = None,
    observer_stride: int = 100,
    snapshot_times: list[float] | None = None,
    stop_n_c: float | None = None,
) -> tuple[TimeSeries, dict[float, np.ndarray]]:
    """Propagate the initial state along the quench schedule.

    Samples observables every observer_stride steps; optionally records
    density snapshots at the nearest step to each requested time, and stops
    early once n_c exceeds stop_n_c after the critical point is crossed
    (used by scans that only need the freeze-out portion).
    """
    if initial_state.n_points != grid.n_points:
        raise ModelError("initial state does not match the grid")
    if dt is None:
        dt = schedule.default_dt()
    n_steps = int(math.ceil(schedule.t_end / dt))
    stepper = Stepper(grid, schedule.omega, schedule.Omega, dt, imaginary=False,
                      spin_in=spin_placement(1.0 + schedule.lam,
                                             1.0 - schedule.lam))
    psi = initial_state.normalized(grid).as_array()

    g_c = schedule.g_c
    eps_start = schedule.eps_start
    inv_tau = 1.0 / schedule.tau_q
    half_lam_p = (1.0 + schedule.lam) / 2.0
    half_lam_m = (1.0 - schedule.lam) / 2.0

    snap_steps: dict[int, float] = {}
    if snapshot_times:
        for ts in snapshot_times:
            snap_steps[min(max(int(round(ts / dt)), 0), n_steps)] = ts
    snapshots: dict[float, np.ndarray] = {}

    records: list[tuple[float, Observables]] = []
    edge = 3  # cells monitored for grid overflow

    def sample(step: int) -> Observables:
        t = min(step * dt, schedule.t_end)
        state = SpinorState(psi[0], psi[1])
        obs = observe(state, grid, schedule.params_at(t))
        if abs(obs.norm - 1.0) > NORM_DRIFT_LIMIT:
            raise DynamicsError(f"norm drift {abs(obs.norm - 1.0):.3e} at t={t:.4g}")
        dens = np.abs(psi[0]) ** 2 + np.abs(psi[1]) ** 2
        edge_mass = grid.dx * float(dens[:edge].sum() + dens[-edge:].sum())
        if edge_mass > BOUNDARY_MASS_LIMIT:
            raise DynamicsError(f"density reached the grid boundary at t={t:.4g}")
        records.append((t, obs))
        return obs

    sample(0)
    if 0 in snap_steps:
        snapshots[snap_steps[0]] = np.abs(psi[0]) ** 2 + np.abs(psi[1]) ** 2

    for step in range(n_steps):
        t_mid = (step + 0.5) * dt
        g_mid = g_c * (1.0 + eps_start + t_mid * inv_tau)
        stepper.step(psi, g_mid * half_lam_p, g_mid * half_lam_m)
        done = step + 1
        if done in snap_steps:
            snapshots[snap_steps[done]] = np.abs(psi[0]) ** 2 + np.abs(psi[1]) ** 2
        if done % observer_stride == 0 or done == n_steps:
            obs = sample(done)
            if (
                stop_n_c is not None
                and done * dt > schedule.t_c
                and obs.n_c >= stop_n_c
            ):
                break

    t_arr = np.array([t for t, _ in records])
    series = TimeSeries(
        lam=schedule.lam,
        tau_q=schedule.tau_q,
        t_c=schedule.t_c,
        t=t_arr,
        s=eps_start + t_arr * inv_tau,
        g_tilde=g_c * (1.0 + eps_start + t_arr * inv_tau),
        n_c=np.array([o.n_c for _, o in records]),
        dx=np.array([o.dx for _, o in records]),
        dp=np.array([o.dp for _, o in records]),
        mean_x=np.array([o.mean_x for _, o in records]),
        mean_p=np.array([o.mean_p for _, o in records]),
        norm=np.array([o.norm for _, o in records]),
        energy=np.array([o.energy for _, o in records]),
    )
    return series, snapshots
