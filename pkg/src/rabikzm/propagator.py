"""Strang split-step kernels for the spinor wavefunction.

One step is

    U_x(dt/2)  U_p(dt)  U_x(dt/2)

where U_x exponentiates the x-diagonal 2x2 block pointwise in x and U_p
exponentiates the p-diagonal block per momentum component between a
forward/inverse FFT pair (c = sqrt(Omega omega / 2)).  The x block always
holds omega x^2/2 + c xi sigma_z x and the p block omega p^2/2 +
c xi' sigma_y p; the spin term Omega sigma_x/2 is co-exponentiated with
whichever block carries the dominant coupling (spin_in = "x" or "p").
Placing it next to the large coupling removes the leading splitting error
from [Omega sigma_x/2, coupling], so x-type (lam > 0) and p-type (lam < 0)
ramps converge identically.  Both couplings are evaluated at the same
midpoint time, so every substep is exactly unitary and the splitting is
second order in dt.

The same kernels with dt -> -i dtau give the imaginary-time flow used for
ground-state relaxation (cos/sin become cosh/sinh; each step is followed by
renormalization).
"""

from __future__ import annotations

import numpy as np

from .model import Grid, ModelParams


def spin_placement(xi: float, xi_prime: float) -> str:
    """Which block should carry the spin term for these couplings."""
    return "p" if abs(xi_prime) > abs(xi) else "x"


def _safe(r: np.ndarray) -> np.ndarray:
    """Divisor-safe copy of r; where r = 0 the numerator vanishes too."""
    return np.where(r > 0.0, r, 1.0)


class Stepper:
    """Preallocated split-step engine on a fixed grid with a fixed dt."""

    def __init__(self, grid: Grid, omega: float, Omega: float, dt: float,
                 imaginary: bool = False, spin_in: str = "x"):
        if spin_in not in ("x", "p"):
            raise ValueError("spin_in must be 'x' or 'p'")
        self.grid = grid
        self.omega = omega
        self.Omega = Omega
        self.dt = dt
        self.imaginary = imaginary
        self.spin_in = spin_in
        self.x = grid.x
        self.k = grid.k
        self._coupling = np.sqrt(Omega * omega / 2.0)
        self._h0x = 0.5 * Omega if spin_in == "x" else 0.0
        self._h0p = 0.5 * Omega if spin_in == "p" else 0.0
        if imaginary:
            # exp(-H tau): scalar potential/kinetic dampers
            self._px_half = np.exp(-0.5 * omega * self.x**2 * (dt / 2.0))
            self._pk_full = np.exp(-0.5 * omega * self.k**2 * dt)
        else:
            self._px_half = np.exp(-0.5j * omega * self.x**2 * (dt / 2.0))
            self._pk_full = np.exp(-0.5j * omega * self.k**2 * dt)

    # -- kernel construction -------------------------------------------------

    def x_kernel(self, xi: float):
        """2x2 exponential of the x block over the half step, as (u00, u01, u11)."""
        hz = (self._coupling * xi) * self.x
        h0 = self._h0x
        r = np.sqrt(h0**2 + hz**2)
        rs = _safe(r)
        a = r * (self.dt / 2.0)
        if self.imaginary:
            # exp(-(h.sigma) tau) = cosh(r tau) - sinh(r tau) (h.sigma)/r
            ca = np.cosh(a)
            sa = np.sinh(a) / rs
            u00 = self._px_half * (ca - sa * hz)
            u11 = self._px_half * (ca + sa * hz)
            u01 = self._px_half * (-sa * h0)
        else:
            # exp(i a) supplies cos and sin in one transcendental pass
            e = np.exp(1j * a)
            sa = e.imag / rs
            pc = self._px_half * e.real
            psz = self._px_half * (1j * sa)
            u00 = pc - psz * hz
            u11 = pc + psz * hz
            u01 = psz * (-h0)
        return u00, u01, u11

    def p_kernel(self, xi_prime: float):
        """2x2 exponential of the p block over the full step, as (c, o01, o10)."""
        hy = (self._coupling * xi_prime) * self.k
        h0 = self._h0p
        r = np.sqrt(h0**2 + hy**2)
        rs = _safe(r)
        a = r * self.dt
        if self.imaginary:
            # exp(-(h.sigma) tau); (h.sigma)_01 = h0 - i hy, _10 = h0 + i hy
            ca = np.cosh(a)
            sa = np.sinh(a) / rs
            return (self._pk_full * ca,
                    self._pk_full * (-sa * (h0 - 1j * hy)),
                    self._pk_full * (-sa * (h0 + 1j * hy)))
        e = np.exp(1j * a)
        sa = e.imag / rs
        return (self._pk_full * e.real,
                self._pk_full * (-1j * sa * h0 - sa * hy),
                self._pk_full * (-1j * sa * h0 + sa * hy))

    # -- application ---------------------------------------------------------

    @staticmethod
    def apply_x(psi: np.ndarray, kern) -> None:
        u00, u01, u11 = kern
        up = u00 * psi[0] + u01 * psi[1]
        dn = u01 * psi[0] + u11 * psi[1]
        psi[0] = up
        psi[1] = dn

    @staticmethod
    def apply_p(psi: np.ndarray, kern) -> None:
        ct, o01, o10 = kern
        phi = np.fft.fft(psi, axis=1)
        f0 = ct * phi[0] + o01 * phi[1]
        f1 = o10 * phi[0] + ct * phi[1]
        phi[0] = f0
        phi[1] = f1
        psi[:] = np.fft.ifft(phi, axis=1)

    def step(self, psi: np.ndarray, xi: float, xi_prime: float) -> None:
        """Advance psi (shape (2, n), modified in place) by one full step."""
        xk = self.x_kernel(xi)
        self.apply_x(psi, xk)
        self.apply_p(psi, self.p_kernel(xi_prime))
        self.apply_x(psi, xk)
