"""Uniform periodic grids, sampled functions and the hbar-scaled Fourier transforms.

Conventions (one degree of freedom):

* position samples ``x_i = x_min + i*dx``, ``i in [0, n)``, with a domain
  symmetric about the origin so that ``x_{n/2} = 0``;
* momentum samples ``p_k = (k - n/2)*dp`` with ``dp = 2*pi*hbar/(n*dx)``,
  stored in increasing order;
* the Fourier kernel is ``exp(-i p x / hbar) / sqrt(2 pi hbar)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np


class GridMismatchError(ValueError):
    """Raised when two sampled objects live on different grids."""


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Periodic position grid together with its induced momentum grid."""

    n: int
    x_min: float
    x_max: float
    hbar: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)) or self.n < 8:
            raise ValueError(f"n must be a power of two >= 8, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("x_min", "x_max", "hbar"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        # all phase-space machinery assumes the origin sits at index n/2
        if not math.isclose(self.x_min, -self.x_max, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("domain must be symmetric about 0 (x_min == -x_max)")

    @classmethod
    def square(cls, n, hbar=1.0):
        """Grid with ``dx == dp``, on which the rotation J permutes indices."""
        dx = math.sqrt(2.0 * math.pi * hbar / n)
        half = 0.5 * n * dx
        return cls(n, -half, half, hbar)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n

    @property
    def dp(self):
        return 2.0 * math.pi * self.hbar / (self.n * self.dx)

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def p(self):
        return self.dp * np.arange(-self.n // 2, self.n // 2)

    @property
    def is_square(self):
        return math.isclose(self.dx, self.dp, rel_tol=1e-12)

    def dual(self):
        """The momentum grid viewed as a position grid (output of ``fourier``)."""
        half = 0.5 * self.n * self.dp
        return GridSpec(self.n, -half, half, self.hbar)

    def mesh(self):
        """``(X, P)`` arrays of shape ``(n, n)`` with ``X[i, k] = x_i``, ``P[i, k] = p_k``."""
        return np.meshgrid(self.x, self.p, indexing="ij")

    def matches(self, other):
        return (
            self.n == other.n
            and math.isclose(self.x_min, other.x_min, rel_tol=1e-12, abs_tol=1e-300)
            and math.isclose(self.x_max, other.x_max, rel_tol=1e-12, abs_tol=1e-300)
            and math.isclose(self.hbar, other.hbar, rel_tol=1e-12)
        )

    def index_of_x(self, x, tol=1e-9):
        """Integer ``s`` with ``x == s*dx`` (lattice offset from the origin)."""
        s = x / self.dx
        r = round(s)
        if abs(s - r) > tol:
            raise ValueError(f"x={x!r} is not on the position lattice (x/dx={s:.12g}); "
                             f"nearest lattice point is {r * self.dx!r}")
        return int(r)

    def index_of_p(self, p, tol=1e-9):
        s = p / self.dp
        r = round(s)
        if abs(s - r) > tol:
            raise ValueError(f"p={p!r} is not on the momentum lattice (p/dp={s:.12g}); "
                             f"nearest lattice point is {r * self.dp!r}")
        return int(r)

    def to_dict(self):
        return {"n": self.n, "x_min": self.x_min, "x_max": self.x_max, "hbar": self.hbar}


def _check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains NaN or Inf")


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex samples ``psi(x_i)`` on a grid."""

    grid: GridSpec
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.complex128)
        if arr.shape != (self.grid.n,):
            raise ValueError(f"signal needs {self.grid.n} samples, got shape {arr.shape}")
        _check_finite(arr, "signal")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def norm(self):
        return math.sqrt(self.grid.dx * float(np.sum(np.abs(self.samples) ** 2)))

    def normalized(self):
        return Signal(self.grid, self.samples / self.norm())

    def __add__(self, other):
        _same_grid(self.grid, other.grid)
        return Signal(self.grid, self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self.grid, other.grid)
        return Signal(self.grid, self.samples - other.samples)

    def __mul__(self, scalar):
        return Signal(self.grid, self.samples * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Complex samples ``f(x_i, p_k)``; row index is position, column is momentum."""

    grid: GridSpec
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.complex128)
        n = self.grid.n
        if arr.shape != (n, n):
            raise ValueError(f"field needs shape ({n}, {n}), got {arr.shape}")
        _check_finite(arr, "field")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def from_function(cls, grid, func):
        X, P = grid.mesh()
        return cls(grid, func(X, P))

    def __add__(self, other):
        _same_grid(self.grid, other.grid)
        return PhaseSpaceField(self.grid, self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self.grid, other.grid)
        return PhaseSpaceField(self.grid, self.samples - other.samples)

    def __mul__(self, other):
        if isinstance(other, PhaseSpaceField):
            _same_grid(self.grid, other.grid)
            return PhaseSpaceField(self.grid, self.samples * other.samples)
        return PhaseSpaceField(self.grid, self.samples * other)

    __rmul__ = __mul__

    def conj(self):
        return PhaseSpaceField(self.grid, np.conj(self.samples))

    def compose_J_inverse(self):
        """``f o J^{-1}``, i.e. ``(x, p) -> f(-p, x)``; needs a square grid."""
        if not self.grid.is_square:
            raise ValueError("composition with J needs a square grid (dx == dp)")
        n = self.grid.n
        idx = (n - np.arange(n)) % n
        return PhaseSpaceField(self.grid, self.samples[idx, :].T)

    def compose_J(self):
        """``f o J``, i.e. ``(x, p) -> f(p, -x)``; needs a square grid."""
        if not self.grid.is_square:
            raise ValueError("composition with J needs a square grid (dx == dp)")
        n = self.grid.n
        idx = (n - np.arange(n)) % n
        return PhaseSpaceField(self.grid, self.samples.T[idx, :])

    def shifted(self, sx, sp):
        """Periodic translate: ``g(x_i, p_k) = f(x_{i-sx}, p_{k-sp})``."""
        return PhaseSpaceField(self.grid, np.roll(self.samples, (sx, sp), axis=(0, 1)))


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError("phase-space point must be finite")

    def __neg__(self):
        return PhasePoint(-self.x, -self.p)


def sigma(z, w):
    """Symplectic form ``sigma(z, w) = p_z x_w - p_w x_z``."""
    return z.p * w.x - w.p * z.x


def _same_grid(a, b):
    if not a.matches(b):
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


# --- centred DFT helpers ---------------------------------------------------

def cfft(a, axis=-1):
    """DFT with both index ranges centred on n/2."""
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def cifft_sum(a, axis=-1):
    """Un-normalised inverse of :func:`cfft` (plain sum with ``e^{+...}``)."""
    n = a.shape[axis]
    return n * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


# --- public transforms -----------------------------------------------------

def fourier(psi: Signal) -> Signal:
    """Unitary hbar-Fourier transform, returned on the dual (momentum) grid."""
    g = psi.grid
    vals = g.dx / math.sqrt(2.0 * math.pi * g.hbar) * cfft(psi.samples)
    return Signal(g.dual(), vals)


def inverse_fourier(phi: Signal) -> Signal:
    """Inverse of :func:`fourier`; ``phi`` lives on a momentum grid."""
    g = phi.grid
    vals = g.dx / math.sqrt(2.0 * math.pi * g.hbar) * cifft_sum(phi.samples)
    return Signal(g.dual(), vals)


def modified_fourier(psi: Signal) -> Signal:
    """The metaplectic Fourier transform ``exp(-i pi/4) * fourier``."""
    out = fourier(psi)
    return Signal(out.grid, np.exp(-0.25j * math.pi) * out.samples)


def inverse_modified_fourier(phi: Signal) -> Signal:
    out = inverse_fourier(phi)
    return Signal(out.grid, np.exp(0.25j * math.pi) * out.samples)


def symplectic_fourier_array(a, grid):
    """Array form of :func:`symplectic_fourier` (no validation)."""
    # axis 0 (x') -> p with e^{-i p x'/hbar}; axis 1 (p') -> x with e^{+i p' x/hbar}
    b = cfft(a, axis=0)
    c = cifft_sum(b, axis=1)
    return c.T * (grid.dx * grid.dp / (2.0 * math.pi * grid.hbar))


def symplectic_fourier(a: PhaseSpaceField) -> PhaseSpaceField:
    """Symplectic Fourier transform; it is its own inverse."""
    if not isinstance(a, PhaseSpaceField):
        raise TypeError("symplectic_fourier expects a PhaseSpaceField")
    return PhaseSpaceField(a.grid, symplectic_fourier_array(a.samples, a.grid))


def l2_inner(psi: Signal, phi: Signal) -> complex:
    """``(psi|phi) = dx * sum psi * conj(phi)``."""
    _same_grid(psi.grid, phi.grid)
    return complex(psi.grid.dx * np.vdot(phi.samples, psi.samples))


def phase_space_inner(f: PhaseSpaceField, g: PhaseSpaceField) -> complex:
    _same_grid(f.grid, g.grid)
    w = f.grid.dx * f.grid.dp
    return complex(w * np.vdot(g.samples.ravel(), f.samples.ravel()))


def upsample(samples, factor):
    """Trigonometric interpolation of periodic samples onto a ``factor``-fold finer grid.

    The Nyquist coefficient is split evenly between the two new bins so that
    real input stays real and the original samples are reproduced exactly.
    """
    n = samples.shape[0]
    if factor == 1:
        return np.array(samples, dtype=np.complex128)
    big = factor * n
    spec = np.fft.fft(samples)
    padded = np.zeros(big, dtype=np.complex128)
    half = n // 2
    padded[:half] = spec[:half]
    padded[big - half + 1:] = spec[half + 1:]
    padded[half] = 0.5 * spec[half]
    padded[big - half] = 0.5 * spec[half]
    return np.fft.ifft(padded) * factor


def delta_signal(grid, index):
    """Discrete delta of weight ``1/dx`` at ``x_index``."""
    vals = np.zeros(grid.n, dtype=np.complex128)
    vals[index] = 1.0 / grid.dx
    return Signal(grid, vals)


def delta_field(grid, i, k):
    """Discrete delta of weight ``2 pi hbar/(dx dp)`` at ``(x_i, p_k)``."""
    vals = np.zeros((grid.n, grid.n), dtype=np.complex128)
    vals[i, k] = 2.0 * math.pi * grid.hbar / (grid.dx * grid.dp)
    return PhaseSpaceField(grid, vals)
