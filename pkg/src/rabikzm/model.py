"""Model parameters, grids, spinor states and Hamiltonian action.

The anisotropic Rabi Hamiltonian is used in two representations:

* a uniform position grid, where the spinor wavefunction has two complex
  components (sigma_z basis) and momentum terms act through the FFT;
* a truncated Fock basis {|spin> x |n>}, used for dense diagonalization.

Units: hbar = 1 and energies/times are quoted in units of the oscillator
frequency omega (omega = 1 in all defaults).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

HALF_WIDTH_DEFAULT = 48.0
N_POINTS_DEFAULT = 1024


class ModelError(ValueError):
    """Invalid physical parameters or incompatible state/grid."""


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the anisotropic quantum Rabi model.

    lam is the (signed, dimensionless) anisotropy ratio between rotating and
    counter-rotating couplings; g_tilde = 2 g / sqrt(Omega * omega) is the
    dimensionless coupling strength.
    """

    lam: float
    g_tilde: float
    omega: float = 1.0
    Omega: float = 1000.0

    def __post_init__(self):
        if self.omega <= 0 or self.Omega <= 0:
            raise ModelError("omega and Omega must be positive")
        if self.g_tilde < 0:
            raise ModelError("g_tilde must be nonnegative")

    @property
    def xi(self) -> float:
        return self.g_tilde * (1.0 + self.lam) / 2.0

    @property
    def xi_prime(self) -> float:
        return self.g_tilde * (1.0 - self.lam) / 2.0

    @property
    def g_c(self) -> float:
        return 2.0 / (1.0 + abs(self.lam))

    @property
    def epsilon(self) -> float:
        """Dimensionless distance from the critical point, |g - g_c| / g_c."""
        return abs(self.g_tilde - self.g_c) / self.g_c

    def with_g(self, g_tilde: float) -> "ModelParams":
        return replace(self, g_tilde=g_tilde)


def coupling_scales(params: ModelParams) -> tuple[float, float, float, float]:
    """Return (xi, xi_prime, g_c, epsilon) for the given parameters."""
    return params.xi, params.xi_prime, params.g_c, params.epsilon


@dataclass(frozen=True)
class Grid:
    """Uniform position grid with FFT-conjugate momentum samples."""

    half_width: float = HALF_WIDTH_DEFAULT
    n_points: int = N_POINTS_DEFAULT

    def __post_init__(self):
        n = self.n_points
        if n < 2 or (n & (n - 1)) != 0:
            raise ModelError("n_points must be a power of two")
        if self.half_width <= 0:
            raise ModelError("half_width must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Momentum samples in FFT (wrap-around) ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass
class SpinorState:
    """Two-component wavefunction on a grid, stored in the sigma_z basis."""

    psi_up: np.ndarray
    psi_down: np.ndarray

    def __post_init__(self):
        self.psi_up = np.asarray(self.psi_up, dtype=complex)
        self.psi_down = np.asarray(self.psi_down, dtype=complex)
        if self.psi_up.shape != self.psi_down.shape:
            raise ModelError("components must have equal length")

    @property
    def n_points(self) -> int:
        return self.psi_up.size

    def as_array(self) -> np.ndarray:
        return np.stack([self.psi_up, self.psi_down])

    def copy(self) -> "SpinorState":
        return SpinorState(self.psi_up.copy(), self.psi_down.copy())

    def norm(self, grid: Grid) -> float:
        dens = np.abs(self.psi_up) ** 2 + np.abs(self.psi_down) ** 2
        return float(np.sqrt(grid.dx * dens.sum()))

    def normalized(self, grid: Grid) -> "SpinorState":
        n = self.norm(grid)
        if n == 0:
            raise ModelError("cannot normalize the zero state")
        return SpinorState(self.psi_up / n, self.psi_down / n)

    def to_sigma_x(self) -> tuple[np.ndarray, np.ndarray]:
        """Amplitudes (psi_plus, psi_minus) on the sigma_x eigenbasis."""
        s = 1.0 / np.sqrt(2.0)
        return s * (self.psi_up + self.psi_down), s * (self.psi_up - self.psi_down)

    @staticmethod
    def from_sigma_x(psi_plus: np.ndarray, psi_minus: np.ndarray) -> "SpinorState":
        s = 1.0 / np.sqrt(2.0)
        return SpinorState(s * (psi_plus + psi_minus), s * (psi_plus - psi_minus))


def inner(a: SpinorState, b: SpinorState, grid: Grid) -> complex:
    """dx-weighted inner product <a|b>."""
    return complex(
        grid.dx
        * (np.vdot(a.psi_up, b.psi_up) + np.vdot(a.psi_down, b.psi_down))
    )


def apply_hamiltonian(params: ModelParams, state: SpinorState, grid: Grid) -> SpinorState:
    """Apply H to a spinor state on the grid.

    x-diagonal terms (omega x^2/2, Omega sigma_x/2, coupling sigma_z x) act
    pointwise; the momentum terms (omega p^2/2, coupling sigma_y p) act through
    a forward/inverse FFT pair.  Linear; does not require a normalized input.
    """
    if state.n_points != grid.n_points:
        raise ModelError("state and grid sizes differ")
    x = grid.x
    k = grid.k
    w, W = params.omega, params.Omega
    c = np.sqrt(W * w / 2.0)
    up, dn = state.psi_up, state.psi_down

    vx = 0.5 * w * x**2
    czx = c * params.xi * x
    out_up = vx * up + 0.5 * W * dn + czx * up
    out_dn = vx * dn + 0.5 * W * up - czx * dn

    # momentum-space part: omega p^2/2 on each component plus c xi' p sigma_y
    fu = np.fft.fft(up)
    fd = np.fft.fft(dn)
    kin = 0.5 * w * k**2
    cp = c * params.xi_prime * k
    # sigma_y psi = (-i psi_down, +i psi_up)
    out_up += np.fft.ifft(kin * fu - 1j * cp * fd)
    out_dn += np.fft.ifft(kin * fd + 1j * cp * fu)
    return SpinorState(out_up, out_dn)


def energy_expectation(params: ModelParams, state: SpinorState, grid: Grid) -> float:
    """Rayleigh quotient <psi|H|psi> / <psi|psi>."""
    hpsi = apply_hamiltonian(params, state, grid)
    num = inner(state, hpsi, grid).real
    den = inner(state, state, grid).real
    return num / den


def fock_annihilation(n_max: int) -> np.ndarray:
    """Bosonic annihilation operator truncated at photon number n_max."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1)


def fock_hamiltonian(params: ModelParams, n_max: int) -> np.ndarray:
    """Dense Hamiltonian matrix on {|spin> x |n>}, dimension 2(n_max+1).

    Spin ordering follows the sigma_z basis (up first); sigma_pm are defined
    as (sigma_z -+ i sigma_y)/2, i.e. ladder operators of the sigma_x
    two-level term.
    """
    if n_max < 1:
        raise ModelError("n_max must be at least 1")
    a = fock_annihilation(n_max)
    ad = a.T
    num = ad @ a
    eye_b = np.eye(n_max + 1)

    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sp = (sz - 1j * sy) / 2.0
    sm = (sz + 1j * sy) / 2.0

    g = params.g_tilde * np.sqrt(params.Omega * params.omega) / 2.0
    h = (
        params.omega * np.kron(np.eye(2), num)
        + 0.5 * params.Omega * np.kron(sx, eye_b)
        + g * (np.kron(sp, a) + np.kron(sm, ad))
        + g * params.lam * (np.kron(sp, ad) + np.kron(sm, a))
    )
    return h


def fock_position(n_max: int) -> np.ndarray:
    """x = (a + a^dag)/sqrt(2) on the truncated Fock space (boson part only)."""
    a = fock_annihilation(n_max)
    return (a + a.T) / np.sqrt(2.0)


def fock_momentum(n_max: int) -> np.ndarray:
    """p = i(a^dag - a)/sqrt(2) on the truncated Fock space (boson part only)."""
    a = fock_annihilation(n_max)
    return 1j * (a.T - a) / np.sqrt(2.0)


def fock_parity(n_max: int) -> np.ndarray:
    """Discrete symmetry sigma_x x (-1)^n of the model."""
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    signs = np.diag((-1.0) ** np.arange(n_max + 1))
    return np.kron(sx, signs)
