"""Non-perturbative ground states and spectra.

Two independent routes:

* imaginary-time split-step relaxation on the position grid (shares the
  propagator kernels with the real-time dynamics), and
* dense exact diagonalization in the truncated Fock basis.

The grid relaxation reports the parity-symmetric ground state by default; in
the superradiant regime an optional displaced seed selects one
symmetry-broken well instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import analytics
from .model import (
    Grid,
    ModelError,
    ModelParams,
    SpinorState,
    apply_hamiltonian,
    energy_expectation,
    fock_hamiltonian,
    fock_parity,
    inner,
)
from .propagator import Stepper, spin_placement


class SolverError(RuntimeError):
    """Non-convergence or an unusable discretization."""


@dataclass
class GroundStateResult:
    state: SpinorState
    energy: float
    residual: float  # ||H psi - E psi|| (dx-weighted L2)
    iterations: int


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray  # ascending, lowest k
    gap_normal: float  # E1 - E0
    gap_physical: float  # E1 - E0 (normal) or E2 - E0 (superradiant doublet)
    parity_markers: np.ndarray
    n_max: int


def density(state: SpinorState) -> np.ndarray:
    """Basis-independent total density |psi_up|^2 + |psi_down|^2."""
    return np.abs(state.psi_up) ** 2 + np.abs(state.psi_down) ** 2


def _seed_state(params: ModelParams, grid: Grid, symmetry_breaking: bool) -> SpinorState:
    """Deterministic relaxation seed.

    Normal phase: the analytic Gaussian profile.  Superradiant: an even cat
    of well Gaussians (symmetric default) or a single Gaussian displaced by
    half the equilibrium shift (symmetry-breaking option).  p-type
    displacements are applied as momentum boosts exp(+-i beta x).
    """
    phase = analytics.phase_of(params)
    if phase is analytics.PhaseLabel.NORMAL:
        if params.epsilon == 0.0:
            # critical point: fall back to the bare vacuum profile
            return analytics.normal_ground_profile(params.with_g(0.0), grid)
        return analytics.normal_ground_profile(params, grid)

    osc = analytics.effective_oscillator(params)
    x = grid.x
    width = max(osc.width, 0.2)
    disp = osc.displacement
    if phase is analytics.PhaseLabel.SUPERRADIANT_X:
        if disp + 5.0 / width > grid.half_width:
            raise SolverError("grid extent does not contain the displaced wells")
        if symmetry_breaking:
            # seed at the full well displacement: a half-displaced seed has
            # overlap ~exp(-alpha_g^2/8) with the target well, which underflows
            # at large Omega and lets round-off restore the symmetry
            phi = np.exp(-0.5 * width**2 * (x - disp) ** 2)
        else:
            phi = np.exp(-0.5 * width**2 * (x - disp) ** 2) + np.exp(
                -0.5 * width**2 * (x + disp) ** 2
            )
    else:
        if disp + 5.0 > np.pi / grid.dx:
            raise SolverError("grid spacing does not resolve the momentum displacement")
        env = np.exp(-0.5 * width**2 * x**2)
        if symmetry_breaking:
            phi = env * np.exp(1j * disp * x)
        else:
            phi = env * np.cos(disp * x)
    zeros = np.zeros_like(x, dtype=complex)
    state = SpinorState.from_sigma_x(zeros, phi.astype(complex))
    return state.normalized(grid)


def ground_state(
    params: ModelParams,
    grid: Grid,
    tol: float = 1e-12,
    max_iter: int = 400_000,
    symmetry_breaking: bool = False,
    dtau_schedule: tuple[float, ...] = (2e-3, 5e-4),
) -> GroundStateResult:
    """Relax to the ground state by imaginary-time split-step propagation.

    The imaginary time step is annealed through dtau_schedule; within each
    stage the state is renormalized every step and the stage ends when the
    energy change per unit imaginary time falls below the stage tolerance
    (tol for the final stage).  dtau must stay well below 1/Omega scales or
    the Trotterized flow can favor spurious grid-scale modes; the defaults
    are sized for Omega up to ~1e3.
    """
    state = _seed_state(params, grid, symmetry_breaking)
    psi = state.as_array()
    energy = energy_expectation(params, state, grid)
    iterations = 0
    block = 50
    for stage, dtau in enumerate(dtau_schedule):
        last = stage == len(dtau_schedule) - 1
        stage_tol = tol if last else max(tol, 1e-9)
        # longer blocks at small dtau keep the rate estimate above fp noise
        n_block = block if dtau >= 2e-3 else 4 * block
        stepper = Stepper(grid, params.omega, params.Omega, dtau,
                          imaginary=True,
                          spin_in=spin_placement(params.xi, params.xi_prime))
        converged = False
        while iterations < max_iter:
            for _ in range(n_block):
                stepper.step(psi, params.xi, params.xi_prime)
                nrm = math.sqrt(grid.dx * float(np.sum(np.abs(psi) ** 2)))
                psi *= 1.0 / nrm
            iterations += n_block
            state = SpinorState(psi[0], psi[1])
            new_energy = energy_expectation(params, state, grid)
            rate = abs(new_energy - energy) / (n_block * dtau)
            energy = new_energy
            if rate < stage_tol:
                converged = True
                break
        if not converged:
            raise SolverError(
                f"imaginary-time relaxation did not converge (dtau={dtau}, "
                f"iterations={iterations})"
            )
    state = SpinorState(psi[0], psi[1]).normalized(grid)
    energy = energy_expectation(params, state, grid)
    hpsi = apply_hamiltonian(params, state, grid)
    res = SpinorState(hpsi.psi_up - energy * state.psi_up,
                      hpsi.psi_down - energy * state.psi_down)
    residual = float(np.sqrt(inner(res, res, grid).real))
    return GroundStateResult(state=state, energy=energy, residual=residual,
                             iterations=iterations)


def default_n_max(params: ModelParams) -> int:
    """Cutoff heuristic: 4x the expected photon number plus headroom.

    The superradiant displacement pumps the mean photon number to about
    half the squared displacement.
    """
    disp = analytics.displacement(params)
    return int(4 * (0.5 * disp**2)) + 50


def spectrum(
    params: ModelParams,
    n_max: int | None = None,
    k: int = 6,
    convergence_tol: float = 1e-8,
    max_n_max: int = 4000,
) -> SpectrumResult:
    """Lowest k eigenvalues from dense Fock-basis diagonalization.

    The cutoff is grown until the lowest three eigenvalues shift by less
    than convergence_tol under n_max -> n_max + 20.  gap_physical is E1-E0
    in the normal phase; in the superradiant phase, where (E0, E1) collapse
    into a quasi-degenerate doublet, it is E2-E0 (the excitation within one
    symmetry-broken well).
    """
    n = n_max if n_max is not None else default_n_max(params)
    vals = scipy.linalg.eigvalsh(fock_hamiltonian(params, n))[: k + 1]
    while True:
        n_next = n + 20
        if n_next > max_n_max:
            raise SolverError(f"Fock cutoff not converged below n_max={max_n_max}")
        vals_next = scipy.linalg.eigvalsh(fock_hamiltonian(params, n_next))[: k + 1]
        if np.max(np.abs(vals_next[:3] - vals[:3])) < convergence_tol:
            n, vals = n_next, vals_next
            break
        n, vals = n_next, vals_next

    h = fock_hamiltonian(params, n)
    evals, evecs = scipy.linalg.eigh(h, subset_by_index=(0, k - 1))
    par = fock_parity(n)
    markers = np.real(np.einsum("ij,jk,ki->i", evecs.conj().T, par, evecs))
    superradiant = analytics.phase_of(params) is not analytics.PhaseLabel.NORMAL
    gap_normal = float(evals[1] - evals[0])
    gap_physical = float(evals[2] - evals[0]) if superradiant else gap_normal
    return SpectrumResult(
        eigenvalues=evals,
        gap_normal=gap_normal,
        gap_physical=gap_physical,
        parity_markers=markers,
        n_max=n,
    )
