"""tau-Wigner distributions, ambiguity functions and Cohen-class filtering.

Fast paths never sample a signal off the (half-)lattice: the cross-Wigner
and ambiguity functions are built from one table of lag products on the
doubled lattice, and every other member of the family is obtained by a
pure-phase or sinc multiplier in the symplectic-Fourier (ambiguity) domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from . import _kernels
from .grid import (
    GridSpec,
    PhaseSpaceField,
    Signal,
    _same_grid,
    cfft,
    fourier,
    symplectic_fourier_array,
    upsample,
)


def _check_tau(tau):
    tau = float(tau)
    if not math.isfinite(tau):
        raise ValueError("tau must be finite")
    return tau


@dataclass(frozen=True, eq=False)
class CohenMultiplier:
    """Ambiguity-domain multiplier ``M``: the filtered distribution is ``F_sigma(M * F_sigma W)``."""

    grid: GridSpec
    samples: np.ndarray = field(repr=False)

    def apply(self, w: PhaseSpaceField) -> PhaseSpaceField:
        _same_grid(self.grid, w.grid)
        return PhaseSpaceField(w.grid, _filter(w.samples, self.samples, w.grid))


def _filter(w, mult, grid):
    return symplectic_fourier_array(mult * symplectic_fourier_array(w, grid), grid)


def _px(grid):
    return np.outer(grid.x, grid.p)


def sinc_half(u):
    """``sin(u)/u`` with the series ``1 - u^2/6`` near the origin."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-8
    out[small] = 1.0 - u[small] ** 2 / 6.0
    big = ~small
    out[big] = np.sin(u[big]) / u[big]
    return out


def theta_multiplier(grid: GridSpec) -> CohenMultiplier:
    """Born-Jordan multiplier ``Theta(x, p) = sin(px/2hbar) / (px/2hbar)``."""
    u = _px(grid) / (2.0 * grid.hbar)
    return CohenMultiplier(grid, sinc_half(u).astype(np.complex128))


def tau_multiplier(grid: GridSpec, tau) -> CohenMultiplier:
    """Phase multiplier ``exp(i(2tau-1)px/2hbar)`` taking ``W`` to ``W_tau``."""
    tau = _check_tau(tau)
    return CohenMultiplier(grid, np.exp(0.5j * (2.0 * tau - 1.0) * _px(grid) / grid.hbar))


def theta_tau_kernel(grid: GridSpec, tau) -> PhaseSpaceField:
    """Cohen kernel ``theta_tau`` with ``W_tau = W * theta_tau``.

    Raises
    ------
    ValueError
        At ``tau = 1/2``, where the kernel is the Dirac delta and the
        convolution is the identity.
    """
    tau = _check_tau(tau)
    c = 2.0 * tau - 1.0
    if c == 0.0:
        raise ValueError("theta_tau is the Dirac delta at tau = 1/2; use the identity instead")
    amp = 1.0 / (abs(c) * math.pi * grid.hbar)
    return PhaseSpaceField(grid, amp * np.exp(1j * (2.0 / c) * _px(grid) / grid.hbar))


# --- Wigner and ambiguity ---------------------------------------------------

def _lag_table(psi, phi):
    _same_grid(psi.grid, phi.grid)
    n = psi.grid.n
    u = upsample(psi.samples, 2)
    v = u if phi is psi else upsample(phi.samples, 2)
    return _kernels.lag_products(u, v, n)


def _wigner_array(psi, phi):
    g = _lag_table(psi, phi)
    grid = psi.grid
    n = grid.n
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return grid.dx / (2.0 * math.pi * grid.hbar) * np.fft.fft(g * sign[None, :], axis=1)


def cross_wigner(psi: Signal, phi: Signal) -> PhaseSpaceField:
    """Cross-Wigner distribution ``W(psi, phi)`` sampled on ``(x_i, p_k)``.

    Half-lattice values of both signals come from trigonometric
    interpolation, so the result is exact for band-limited periodic input.

    Parameters
    ----------
    psi, phi : Signal
        Signals on the same grid.

    Returns
    -------
    PhaseSpaceField
        Real (to rounding) when ``phi`` equals ``psi``.
    """
    return PhaseSpaceField(psi.grid, _wigner_array(psi, phi))


def wigner(psi: Signal) -> PhaseSpaceField:
    return cross_wigner(psi, psi)


def tau_wigner(psi: Signal, phi: Signal, tau) -> PhaseSpaceField:
    """Shubin tau-Wigner distribution.

    Computed as ``F_sigma(exp(i(2tau-1)px/2hbar) * F_sigma W(psi, phi))``;
    at ``tau = 1/2`` the cross-Wigner distribution is returned unchanged.
    ``tau = 0`` is the Rihaczek distribution.
    """
    tau = _check_tau(tau)
    w = _wigner_array(psi, phi)
    if tau == 0.5:
        return PhaseSpaceField(psi.grid, w)
    return PhaseSpaceField(psi.grid, _filter(w, tau_multiplier(psi.grid, tau).samples, psi.grid))


def born_jordan_distribution(psi: Signal, phi: Signal) -> PhaseSpaceField:
    """Born-Jordan distribution ``Q(psi, phi)``, the tau-average of ``W_tau`` over [0, 1]."""
    w = _wigner_array(psi, phi)
    return PhaseSpaceField(psi.grid, _filter(w, theta_multiplier(psi.grid).samples, psi.grid))


def cross_ambiguity(psi: Signal, phi: Signal, tau=0.5) -> PhaseSpaceField:
    """Cross-ambiguity function ``A_tau(psi, phi)(x, p)``.

    ``A(x, p) = (2 pi hbar)^-1 sum_x' exp(-i p x'/hbar) psi(x' + x/2) conj phi(x' - x/2) dx``;
    for ``tau != 1/2`` the phase ``exp(-i(2tau-1)px/2hbar)`` is applied, so that
    ``A_tau(z) = (2 pi hbar)^-1 (psi | T_tau(z) phi)``.
    """
    tau = _check_tau(tau)
    g = _lag_table(psi, phi)
    grid = psi.grid
    n = grid.n
    cols = (np.arange(n) - n // 2) % n  # row s of A <-> lag m = s - n/2
    a = grid.dx / (2.0 * math.pi * grid.hbar) * cfft(g[:, cols], axis=0).T
    if tau != 0.5:
        a = a * np.exp(-0.5j * (2.0 * tau - 1.0) * _px(grid) / grid.hbar)
    return PhaseSpaceField(grid, a)


def tau_symbol_of_projector(psi: Signal, phi: Signal, tau) -> PhaseSpaceField:
    """tau-symbol of the rank-one operator with kernel ``psi(x) conj(phi(y))``.

    With the kernel ``K(x, y)`` read off at ``(tau x + (1-tau) y, x - y)``
    the symbol is ``2 pi hbar W_{1-tau}(psi, phi)``; both agree at Weyl.
    """
    tau = _check_tau(tau)
    w = tau_wigner(psi, phi, 1.0 - tau)
    return PhaseSpaceField(w.grid, 2.0 * math.pi * w.grid.hbar * w.samples)


# --- literal quadrature oracle ----------------------------------------------

def _as_fraction(tau_rational):
    if isinstance(tau_rational, Fraction):
        return tau_rational
    if isinstance(tau_rational, tuple) and len(tau_rational) == 2:
        r, s = tau_rational
        if int(r) != r or int(s) != s or s <= 0:
            raise ValueError(f"tau must be r/s with integers r and s > 0, got {tau_rational!r}")
        return Fraction(int(r), int(s))
    if isinstance(tau_rational, int):
        return Fraction(tau_rational)
    raise TypeError("tau_rational must be an (r, s) pair or a Fraction")


def direct_tau_wigner_oracle(psi: Signal, phi: Signal, tau_rational, refine=None) -> PhaseSpaceField:
    """Literal Riemann sum of the tau-Wigner integral.

    The lag runs over ``y = m*dx`` with ``m`` in ``[-n/2, n/2)``; both signals
    are trigonometrically interpolated to a ``refine``-fold lattice so that
    ``x + tau*y`` and ``x - (1-tau)*y`` are lattice points.

    Parameters
    ----------
    tau_rational : (int, int) or Fraction
        ``tau = r/s``; ``s`` must divide ``refine``.
    refine : int, optional
        Refinement factor, default ``s``.
    """
    _same_grid(psi.grid, phi.grid)
    frac = _as_fraction(tau_rational)
    s_den = frac.denominator
    refine = s_den if refine is None else int(refine)
    if refine < 1 or refine % s_den:
        raise ValueError(f"tau={frac} needs a refinement factor divisible by {s_den}, got {refine}")
    grid = psi.grid
    u = upsample(psi.samples, refine)
    v = upsample(phi.samples, refine)
    w = grid.p * grid.dx / grid.hbar
    raw = _kernels.literal_tau_wigner(u, v, grid.n, refine, frac.numerator, s_den, w)
    return PhaseSpaceField(grid, grid.dx / (2.0 * math.pi * grid.hbar) * raw)


def rihaczek(psi: Signal, phi: Signal) -> PhaseSpaceField:
    """Closed form of ``W_0``: ``(2 pi hbar)^-1/2 exp(-ipx/hbar) psi(x) conj(F phi(p))``."""
    _same_grid(psi.grid, phi.grid)
    grid = psi.grid
    fphi = fourier(phi).samples
    vals = np.exp(-1j * _px(grid) / grid.hbar) * np.outer(psi.samples, np.conj(fphi))
    return PhaseSpaceField(grid, vals / math.sqrt(2.0 * math.pi * grid.hbar))


def marginals(field: PhaseSpaceField):
    """``(sum over p * dp, sum over x * dx)`` of a distribution."""
    g = field.grid
    return g.dp * field.samples.sum(axis=1), g.dx * field.samples.sum(axis=0)
