"""SVG figure helpers for the CLI (matplotlib, Agg backend).

Figures are a convenience layer over the CSV outputs; nothing here is needed
for the numerics.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_ground(entries, path) -> None:
    """Overlay ground-state densities for a few g/g_c ratios."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for ratio, x, dens, energy in entries:
        ax.plot(x, dens, label=f"g/g_c = {ratio:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_ground_sweep(ratios, x, dens_map, path) -> None:
    """Density versus coupling as a heat map (pitchfork of the wells)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(x, ratios, dens_map, shading="auto", cmap="magma")
    fig.colorbar(mesh, ax=ax, label="density")
    ax.set_xlabel("x")
    ax.set_ylabel("g / g_c")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_gap(rows, path) -> None:
    """Analytic excitation gap with the exact-diagonalization comparator."""
    rows = [r for r in rows if np.isfinite(r[3])]
    ratio = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ratio, [r[2] for r in rows], "-", label="analytic")
    ax.plot(ratio, [r[3] for r in rows], "o", ms=3, label="exact diag")
    ax.set_xlabel("g / g_c")
    ax.set_ylabel("excitation gap")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_quench(series_list, n_fix, path) -> None:
    """Photon number versus ramp parameter for each quench rate."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for series in series_list:
        ax.plot(series.s, series.n_c, label=f"tau_Q = {series.tau_q:g}")
    ax.axhline(n_fix, color="k", lw=0.8, ls="--")
    ax.set_xlabel("ramp parameter s")
    ax.set_ylabel("photon number")
    ax.set_yscale("log")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_kzscan(result, path) -> None:
    """Freeze delay and length versus tau_Q on log-log axes, per anisotropy."""
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    by_lam = {}
    for row in result.rows:
        if row.event is not None:
            by_lam.setdefault(row.lam, []).append(row)
    for lam, rows in sorted(by_lam.items()):
        tau = [r.tau_q for r in rows]
        axes[0].loglog(tau, [r.event.b_d for r in rows], "o-", ms=3,
                       label=f"lambda = {lam:+g}")
        axes[1].loglog(tau, [r.event.length_at_freeze for r in rows], "o-", ms=3)
    axes[0].set_xlabel("tau_Q")
    axes[0].set_ylabel("freeze delay fraction")
    axes[1].set_xlabel("tau_Q")
    axes[1].set_ylabel("length at freeze-out")
    axes[0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
