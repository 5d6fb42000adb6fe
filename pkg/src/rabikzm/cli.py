"""Command-line interface: ground, gap, quench and kzscan subcommands.

Configuration is a flat ``key = value`` text file; every key can also be
overridden on the command line with ``--set key=value``.  CSV tables are the
primary output; SVG figures are an optional convenience (--plots).  Exit
codes: 0 success, 2 configuration error, 3 numerical failure, 4 partial scan
failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import analytics, kzm, solver
from .dynamics import (TIMESERIES_COLUMNS, DynamicsError, QuenchSchedule,
                       evolve)
from .model import Grid, ModelError, ModelParams
from .solver import SolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

OUT_ENV_VAR = "RABI_KZM_OUT"


class ConfigError(ValueError):
    pass


def _float_list(text) -> tuple[float, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(float(v) for v in text)
    parts = [p for p in str(text).replace(";", ",").split(",") if p.strip()]
    return tuple(float(p) for p in parts)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration (validated against module limits)."""

    omega: float = 1.0
    Omega: float = 1000.0
    lam: float = 1.0
    half_width: float = 48.0
    n_points: int = 1024
    dt: float = 0.0  # 0 means the stability default 2 pi / (20 Omega)
    observer_stride: int = 100
    eps_start: float = -1.0
    eps_end: float = 1.0
    n_fix: float = 5.0
    stop_factor: float = 0.0  # early-stop multiple of n_fix in scans; 0 = off
    tau_q: tuple[float, ...] = tuple(np.logspace(1.0, 2.5, 7))
    lambdas: tuple[float, ...] = (-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0)
    g_ratios: tuple[float, ...] = (0.5, 1.02, 1.5)
    gap_Omega: float = 50.0
    gap_points: int = 37
    out: str = "."
    plots: bool = False
    workers: int = 1

    def validate(self) -> None:
        try:
            Grid(half_width=self.half_width, n_points=self.n_points)
            ModelParams(lam=self.lam, g_tilde=0.0, omega=self.omega, Omega=self.Omega)
        except ModelError as exc:
            raise ConfigError(str(exc)) from exc
        if not (self.eps_start < 0.0 < self.eps_end) or self.eps_start < -1.0:
            raise ConfigError("ramp window must satisfy -1 <= eps_start < 0 < eps_end")
        if self.dt < 0 or self.observer_stride < 1 or self.n_fix <= 0:
            raise ConfigError("dt, observer_stride and n_fix must be positive")
        if any(t <= 0 for t in self.tau_q) or not self.tau_q:
            raise ConfigError("tau_q values must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def grid(self) -> Grid:
        return Grid(half_width=self.half_width, n_points=self.n_points)

    def dt_value(self) -> float | None:
        return self.dt if self.dt > 0 else None

    def dump(self, path: Path) -> None:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            key = "lambda" if f.name == "lam" else f.name
            if isinstance(v, tuple):
                # full precision so a dumped config reloads identically
                v = ",".join(f"{x:.17g}" for x in v)
            lines.append(f"{key} = {v}")
        path.write_text("\n".join(lines) + "\n")


_PARSERS = {
    float: float,
    int: int,
    bool: lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
    str: str,
}


def _coerce(name: str, value):
    proto = RunConfig()
    attr = "lam" if name == "lambda" else name
    if not hasattr(proto, attr):
        raise ConfigError(f"unknown configuration key: {name}")
    current = getattr(proto, attr)
    if isinstance(current, tuple):
        return attr, _float_list(value)
    try:
        return attr, _PARSERS[type(current)](value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {value}") from exc


def load_config(path: str | None, overrides: list[str]) -> RunConfig:
    values = {}
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{ln}: expected 'key = value'")
            key, val = (p.strip() for p in line.split("=", 1))
            attr, parsed = _coerce(key, val)
            values[attr] = parsed
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, val = (p.strip() for p in item.split("=", 1))
        attr, parsed = _coerce(key, val)
        values[attr] = parsed
    cfg = replace(RunConfig(), **values)
    cfg.validate()
    return cfg


def _out_dir(cfg: RunConfig, args) -> Path:
    out = args.out or cfg.out
    if out == ".":
        out = os.environ.get(OUT_ENV_VAR, ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                v if isinstance(v, str) else f"{v:.12g}" for v in row) + "\n")


# -- subcommands -------------------------------------------------------------


def cmd_ground(cfg: RunConfig, out: Path) -> int:
    """Relax ground states at the configured g/g_c ratios; write densities."""
    grid = cfg.grid()
    g_c = analytics.critical_coupling(cfg.lam)
    written = []
    for ratio in cfg.g_ratios:
        params = ModelParams(lam=cfg.lam, g_tilde=ratio * g_c,
                             omega=cfg.omega, Omega=cfg.Omega)
        result = solver.ground_state(params, grid)
        dens = solver.density(result.state)
        name = f"ground_density_ratio{ratio:g}.csv"
        _write_csv(out / name, ("x", "density"), zip(grid.x, dens))
        written.append((ratio, grid.x, dens, result.energy))
        print(f"ground: g/g_c={ratio:g} energy={result.energy:.10g} -> {name}")
    if cfg.plots:
        from . import plots
        plots.plot_ground(written, out / "ground_densities.svg")
        sweep = np.linspace(0.05, 1.5, 30)
        dens_map = []
        for ratio in sweep:
            params = ModelParams(lam=cfg.lam, g_tilde=ratio * g_c,
                                 omega=cfg.omega, Omega=cfg.Omega)
            dens_map.append(solver.density(solver.ground_state(params, grid).state))
        plots.plot_ground_sweep(sweep, grid.x, np.array(dens_map),
                                out / "ground_sweep.svg")
    return EXIT_OK


def cmd_gap(cfg: RunConfig, out: Path) -> int:
    """Analytic gap plus ED comparator across both phases."""
    g_c = analytics.critical_coupling(cfg.lam)
    ratios = np.linspace(0.1, 1.9, cfg.gap_points)
    rows = []
    failures = 0
    for ratio in ratios:
        if abs(ratio - 1.0) < 1e-12:
            continue
        params = ModelParams(lam=cfg.lam, g_tilde=ratio * g_c,
                             omega=cfg.omega, Omega=cfg.gap_Omega)
        analytic = analytics.excitation_gap(params)
        try:
            ed = solver.spectrum(params).gap_physical
            rows.append((ratio, params.epsilon, analytic, ed))
        except SolverError as exc:
            failures += 1
            print(f"gap: ED failed at g/g_c={ratio:g}: {exc}", file=sys.stderr)
            rows.append((ratio, params.epsilon, analytic, math.nan))
    _write_csv(out / "gap.csv", ("g_ratio", "epsilon", "gap_analytic", "gap_ed"), rows)
    # near-critical log-log data (analytic, both sides)
    eps = np.logspace(-4, -1, 25)
    inset = []
    for e in eps:
        below = analytics.excitation_gap(
            ModelParams(lam=cfg.lam, g_tilde=(1 - e) * g_c, omega=cfg.omega,
                        Omega=cfg.gap_Omega))
        above = analytics.excitation_gap(
            ModelParams(lam=cfg.lam, g_tilde=(1 + e) * g_c, omega=cfg.omega,
                        Omega=cfg.gap_Omega))
        inset.append((e, below, above))
    _write_csv(out / "gap_inset.csv", ("epsilon", "gap_below", "gap_above"), inset)
    if cfg.plots:
        from . import plots
        plots.plot_gap(rows, out / "gap.svg")
    print(f"gap: wrote {len(rows)} points (lambda={cfg.lam:g}, "
          f"Omega={cfg.gap_Omega:g})")
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_quench(cfg: RunConfig, out: Path) -> int:
    """One evolution per tau_Q; time series plus space-time density matrix."""
    grid = cfg.grid()
    all_series = []
    for tau_q in cfg.tau_q:
        schedule = QuenchSchedule(lam=cfg.lam, tau_q=tau_q, omega=cfg.omega,
                                  Omega=cfg.Omega, eps_start=cfg.eps_start,
                                  eps_end=cfg.eps_end)
        initial = solver.ground_state(schedule.params_at(0.0), grid).state
        n_snap = 200
        snap_times = list(np.linspace(0.0, schedule.t_end, n_snap))
        series, snaps = evolve(schedule, grid, initial, dt=cfg.dt_value(),
                               observer_stride=cfg.observer_stride,
                               snapshot_times=snap_times)
        tag = f"tau{tau_q:g}"
        series.to_csv(out / f"quench_{tag}.csv")
        times = sorted(snaps)
        matrix = np.array([snaps[t] for t in times])
        with open(out / f"quench_density_{tag}.csv", "w") as fh:
            fh.write("t," + ",".join(f"{xx:.12g}" for xx in grid.x) + "\n")
            for t, row in zip(times, matrix):
                fh.write(f"{t:.12g}," + ",".join(f"{v:.12g}" for v in row) + "\n")
        all_series.append(series)
        print(f"quench: tau_Q={tau_q:g} samples={series.t.size} "
              f"max|norm-1|={np.max(np.abs(series.norm - 1)):.2e}")
    if cfg.plots:
        from . import plots
        plots.plot_quench(all_series, cfg.n_fix, out / "quench_nc.svg")
    return EXIT_OK


def cmd_kzscan(cfg: RunConfig, out: Path) -> int:
    """Full (lambda, tau_Q) scan, freeze events, fits and exponents."""
    scan_cfg = kzm.ScanConfig(
        lambdas=tuple(cfg.lambdas), tau_qs=tuple(cfg.tau_q),
        omega=cfg.omega, Omega=cfg.Omega,
        half_width=cfg.half_width, n_points=cfg.n_points,
        dt=cfg.dt_value(), observer_stride=cfg.observer_stride,
        eps_start=cfg.eps_start, eps_end=cfg.eps_end,
        n_fix=cfg.n_fix, stop_factor=cfg.stop_factor, workers=cfg.workers,
    )
    result = kzm.run_scan(scan_cfg)
    kzm.write_scan_csv(result.rows, out / "kzscan.csv")
    kzm.write_exponent_csv(result.reports, out / "kz_exponents.csv")
    for lam in sorted(result.reports):
        rep = result.reports[lam]
        print(f"kzscan: lambda={lam:+g} z={rep.z:.4f}+-{rep.z_err:.4f} "
              f"nu={rep.nu:.4f}+-{rep.nu_err:.4f}")
    for r in result.rows:
        if r.error:
            print(f"kzscan: FAILED lambda={r.lam:+g} tau_Q={r.tau_q:g}: {r.error}",
                  file=sys.stderr)
    for lam, msg in result.fit_errors.items():
        print(f"kzscan: fit failed for lambda={lam:+g}: {msg}", file=sys.stderr)
    if cfg.plots and result.reports:
        from . import plots
        plots.plot_kzscan(result, out / "kzscan.svg")
    return EXIT_OK if result.ok else EXIT_PARTIAL


COMMANDS = {
    "ground": cmd_ground,
    "gap": cmd_gap,
    "quench": cmd_quench,
    "kzscan": cmd_kzscan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabikzm",
        description="Anisotropic quantum Rabi model: equilibrium analytics "
                    "and Kibble-Zurek quench scans.",
    )
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="flat key = value configuration file")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help=f"output directory (default: ${OUT_ENV_VAR} or .)")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--plots", choices=("true", "false"), default=None)
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a configuration key (repeatable)")
    parser.add_argument("command", choices=sorted(COMMANDS))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = list(args.set)
        if args.workers is not None:
            overrides.append(f"workers={args.workers}")
        if args.plots is not None:
            overrides.append(f"plots={args.plots}")
        cfg = load_config(args.config, overrides)
        out = _out_dir(cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    cfg.dump(out / f"{args.command}_config.txt")
    try:
        return COMMANDS[args.command](cfg, out)
    except (SolverError, DynamicsError, ModelError,
            analytics.AnalyticsError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
