"""Closed-form signal families with known Fourier transforms.

Each family can be sampled exactly on any grid, so identities involving
dilations or Fourier transforms can be tested without resampling error.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from numpy.polynomial.hermite import hermval

from .grid import GridSpec, Signal


class AnalyticSignal:
    """A function known in closed form both in ``x`` and in momentum."""

    hbar: float

    def __call__(self, x):
        raise NotImplementedError

    def ft(self, p):
        """hbar-Fourier transform with kernel ``exp(-ipx/hbar)/sqrt(2 pi hbar)``."""
        raise NotImplementedError

    def sample(self, grid: GridSpec) -> Signal:
        if not math.isclose(grid.hbar, self.hbar, rel_tol=1e-12):
            raise ValueError(f"signal built for hbar={self.hbar}, grid has hbar={grid.hbar}")
        return Signal(grid, self(grid.x))

    def fourier(self) -> "AnalyticSignal":
        """Modified Fourier image ``F = exp(-i pi/4) * Fourier``."""
        return _FourierImage(self)

    def dilate(self, L, mu) -> "AnalyticSignal":
        """``i^mu sqrt|L| psi(L x)``."""
        return _Dilated(self, L, mu)

    def __add__(self, other):
        return Combination([(1.0, self), (1.0, other)])

    def __rmul__(self, c):
        return Combination([(c, self)])


class Gaussian(AnalyticSignal):
    """``c * exp(-a (x - xc)^2 / 2hbar + i pc x / hbar)`` with ``Re a > 0``."""

    def __init__(self, c=1.0, a=1.0, xc=0.0, pc=0.0, hbar=1.0):
        a = complex(a)
        if not a.real > 0:
            raise ValueError("Gaussian width parameter needs a positive real part")
        self.c, self.a, self.xc, self.pc, self.hbar = complex(c), a, float(xc), float(pc), float(hbar)

    @classmethod
    def normalized(cls, a=1.0, xc=0.0, pc=0.0, hbar=1.0):
        a = complex(a)
        # int |exp(-a y^2/2hbar)|^2 dy = sqrt(pi hbar / Re a)
        c = (math.pi * hbar / a.real) ** -0.25
        return cls(c, a, xc, pc, hbar)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.c * np.exp(-self.a * (x - self.xc) ** 2 / (2 * self.hbar) + 1j * self.pc * x / self.hbar)

    def ft(self, p):
        c2 = self.c / cmath.sqrt(self.a) * cmath.exp(1j * self.pc * self.xc / self.hbar)
        return Gaussian(c2, 1.0 / self.a, self.pc, -self.xc, self.hbar)(p)

    def __repr__(self):
        return f"Gaussian(c={self.c}, a={self.a}, xc={self.xc}, pc={self.pc}, hbar={self.hbar})"


class Hermite(AnalyticSignal):
    """Normalised Hermite function ``h_n``; an eigenfunction of the Fourier transform."""

    def __init__(self, order, hbar=1.0):
        if int(order) != order or not 0 <= order <= 8:
            raise ValueError("Hermite order must be an integer in [0, 8]")
        self.order = int(order)
        self.hbar = float(hbar)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        n = self.order
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        norm = (math.pi * self.hbar) ** -0.25 / math.sqrt(2.0 ** n * math.factorial(n))
        y = x / math.sqrt(self.hbar)
        return (norm * hermval(y, coeffs) * np.exp(-0.5 * y ** 2)).astype(np.complex128)

    def ft(self, p):
        return (-1j) ** self.order * self(p)

    def __repr__(self):
        return f"Hermite({self.order}, hbar={self.hbar})"


class Combination(AnalyticSignal):
    def __init__(self, parts):
        parts = [(complex(c), s) for c, s in parts]
        hbars = {s.hbar for _, s in parts}
        if len(hbars) != 1:
            raise ValueError("combined signals must share hbar")
        self.parts = parts
        self.hbar = hbars.pop()

    def __call__(self, x):
        return sum(c * s(x) for c, s in self.parts)

    def ft(self, p):
        return sum(c * s.ft(p) for c, s in self.parts)


class _FourierImage(AnalyticSignal):
    def __init__(self, base):
        self.base = base
        self.hbar = base.hbar

    def __call__(self, x):
        return np.exp(-0.25j * math.pi) * self.base.ft(x)

    def ft(self, p):
        # Fourier applied twice is the parity
        return np.exp(-0.25j * math.pi) * self.base(-np.asarray(p, dtype=float))


class _Dilated(AnalyticSignal):
    def __init__(self, base, L, mu):
        self.base, self.L, self.mu = base, float(L), int(mu) % 4
        self.hbar = base.hbar

    def __call__(self, x):
        return 1j ** self.mu * math.sqrt(abs(self.L)) * self.base(self.L * np.asarray(x, dtype=float))

    def ft(self, p):
        return 1j ** self.mu / math.sqrt(abs(self.L)) * self.base.ft(np.asarray(p, dtype=float) / self.L)


def two_gaussian(separation=8.0, hbar=1.0):
    """Normalised ``g(x - s/2) + g(x + s/2)`` built from unit Gaussians."""
    g1 = Gaussian.normalized(1.0, separation / 2, 0.0, hbar)
    g2 = Gaussian.normalized(1.0, -separation / 2, 0.0, hbar)
    # overlap of the two unit Gaussians is exp(-s^2 / 4 hbar)
    norm = math.sqrt(2.0 + 2.0 * math.exp(-separation ** 2 / (4 * hbar)))
    return Combination([(1 / norm, g1), (1 / norm, g2)])


def chirp(rate=0.5, hbar=1.0):
    """Gaussian-windowed linear chirp ``exp(-x^2/2hbar + i rate x^2/2hbar)``."""
    return Gaussian.normalized(complex(1.0, -rate), 0.0, 0.0, hbar)
