"""Discretised tau-, Weyl and Born-Jordan quantization on a periodic grid.

Operator matrices use quadrature semantics: ``(A psi)(x_i) = sum_j M[i, j] psi(x_j) dx``,
so the identity is ``I/dx`` and composition is ``M1 @ M2 * dx``.

The main builder is the harmonic representation

    A_tau = (2 pi hbar)^-1 * sum_{z0 in grid} F_sigma a(z0) T_tau(z0) dx dp,

assembled one shift diagonal at a time. Independent oracles (the
distributional kernel, the weak form against ``W_tau`` and direct
spectral constructions) live alongside it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from . import _kernels
from .expr import as_expr, evaluate
from .grid import (
    GridSpec,
    PhasePoint,
    PhaseSpaceField,
    Signal,
    _same_grid,
    cfft,
    cifft_sum,
    symplectic_fourier_array,
    upsample,
)
from .transforms import _check_tau, _px, sinc_half, tau_wigner, born_jordan_distribution

# outer band of the sigma-Fourier plane inspected for aliasing
_EDGE_BAND = 1.0 / 16.0
ALIASING_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense discretised operator on a grid (quadrature semantics)."""

    grid: GridSpec
    entries: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        n = self.grid.n
        if arr.shape != (n, n):
            raise ValueError(f"operator needs shape ({n}, {n}), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator contains NaN or Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, grid):
        return cls(grid, np.eye(grid.n) / grid.dx)

    def apply(self, psi: Signal) -> Signal:
        _same_grid(self.grid, psi.grid)
        return Signal(self.grid, self.entries @ psi.samples * self.grid.dx)

    def apply_samples(self, samples):
        return self.entries @ samples * self.grid.dx

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _same_grid(self.grid, other.grid)
        return OperatorMatrix(self.grid, self.entries @ other.entries * self.grid.dx)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, np.conj(self.entries).T)

    def frobenius(self):
        return float(np.linalg.norm(self.entries))

    def __add__(self, other):
        _same_grid(self.grid, other.grid)
        return OperatorMatrix(self.grid, self.entries + other.entries)

    def __sub__(self, other):
        _same_grid(self.grid, other.grid)
        return OperatorMatrix(self.grid, self.entries - other.entries)

    def __mul__(self, scalar):
        return OperatorMatrix(self.grid, self.entries * scalar)

    __rmul__ = __mul__


def adjoint(matrix: OperatorMatrix) -> OperatorMatrix:
    """Hilbert-space adjoint; the ``dx`` weight is symmetric so this is ``conj(M).T``."""
    return matrix.adjoint()


def frobenius_rel(a: OperatorMatrix, b: OperatorMatrix) -> float:
    """``||A - B||_F / ||B||_F``."""
    return float(np.linalg.norm(a.entries - b.entries) / np.linalg.norm(b.entries))


def probe_rel(a: OperatorMatrix, b: OperatorMatrix, probes) -> float:
    """Relative Frobenius distance of ``A`` and ``B`` restricted to a set of probe states.

    ``probes`` is an ``(n, k)`` array of sample columns (or a list of Signals).
    Used for symbols that grow polynomially, whose matrices are only
    meaningful on states localised away from the periodic seam.
    """
    if not isinstance(probes, np.ndarray):
        probes = np.stack([s.samples for s in probes], axis=1)
    da = a.apply_samples(probes) - b.apply_samples(probes)
    return float(np.linalg.norm(da) / np.linalg.norm(b.apply_samples(probes)))


# --- windows ---------------------------------------------------------------

_erf = np.frompyfunc(math.erf, 1, 1)


def flat_top(t, extent, start=0.8, width=0.05):
    """Smooth window equal to 1 for ``|t| < start*extent`` and ~0 near ``|t| = extent``."""
    t = np.asarray(t, dtype=float)
    z = (np.abs(t) - start * extent) / (width * extent)
    return 0.5 * (1.0 - _erf(z).astype(float))


def _wx(grid, x):
    return flat_top(x, grid.x_max)


def _wp(grid, p):
    return flat_top(p, 0.5 * grid.n * grid.dp)


# --- symbols -----------------------------------------------------------------

class SymbolSpec:
    """Base class of the symbol variants.

    Subclasses implement ``evaluate(grid, x, p)`` on broadcastable arrays.
    Terms that mix ``x`` and ``p`` are multiplied by flat-top windows in both
    variables so that the sampled symbol is smooth across the periodic seam;
    pure ``x`` and pure ``p`` terms are exact on the grid and left untouched.
    """

    kind = "abstract"

    def evaluate(self, grid, x, p):  # pragma: no cover - abstract
        raise NotImplementedError

    def render(self, grid: GridSpec) -> PhaseSpaceField:
        X, P = grid.mesh()
        return PhaseSpaceField(grid, np.broadcast_to(self.evaluate(grid, X, P), X.shape))

    def render_refined(self, grid: GridSpec, refine: int):
        """Samples on ``x_min + q*dx/refine`` (``q < refine*n``) times the momentum grid."""
        xr = grid.x_min + grid.dx / refine * np.arange(refine * grid.n)
        out = self.evaluate(grid, xr[:, None], grid.p[None, :])
        return np.array(np.broadcast_to(out, (xr.size, grid.n)), dtype=np.complex128)


@dataclass(frozen=True)
class Monomial(SymbolSpec):
    m: int
    n: int
    kind = "monomial"

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 0 or self.n < 0:
            raise ValueError("monomial exponents must be non-negative integers")

    def evaluate(self, grid, x, p):
        val = np.power(x, self.m) * np.power(p, self.n)
        if self.m and self.n:
            val = val * _wx(grid, x) * _wp(grid, p)
        return val + 0j


@dataclass(frozen=True)
class Quadratic(SymbolSpec):
    """``H(z) = z^T M z / 2`` with ``M = [[m_xx, m_xp], [m_xp, m_pp]]``."""

    M: tuple
    kind = "quadratic"

    def __post_init__(self):
        arr = np.asarray(self.M, dtype=float)
        if arr.shape != (2, 2) or not np.all(np.isfinite(arr)):
            raise ValueError("quadratic form needs a finite 2x2 matrix")
        if abs(arr[0, 1] - arr[1, 0]) > 1e-14 * max(1.0, np.abs(arr).max()):
            raise ValueError("quadratic form must be symmetric")
        object.__setattr__(self, "M", tuple(map(tuple, arr.tolist())))

    def evaluate(self, grid, x, p):
        (a, b), (_, c) = self.M
        val = 0.5 * a * x ** 2 + 0.5 * c * p ** 2
        if b:
            val = val + b * x * p * _wx(grid, x) * _wp(grid, p)
        return val + 0j


@dataclass(frozen=True)
class KineticPotential(SymbolSpec):
    """``p^2/2m + V(x)``."""

    mass: float
    potential: object = "0"
    kind = "kinetic_potential"

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        object.__setattr__(self, "potential", as_expr(self.potential))

    def evaluate(self, grid, x, p):
        return p ** 2 / (2.0 * self.mass) + evaluate(self.potential, x) + 0j


@dataclass(frozen=True)
class Magnetic(SymbolSpec):
    """``(p - A(x))^2/2m + V(x)``."""

    mass: float
    vector_potential: object = "0"
    potential: object = "0"
    kind = "magnetic"

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        object.__setattr__(self, "vector_potential", as_expr(self.vector_potential))
        object.__setattr__(self, "potential", as_expr(self.potential))

    def evaluate(self, grid, x, p):
        av = evaluate(self.vector_potential, x)
        v = evaluate(self.potential, x)
        m2 = 2.0 * self.mass
        cross = -2.0 * av * p * _wx(grid, x) * _wp(grid, p)
        return (p ** 2 + cross + av ** 2) / m2 + v + 0j


@dataclass(frozen=True, eq=False)
class GridSymbol(SymbolSpec):
    """A sampled symbol, optionally with the analytic function it came from.

    Without ``func`` the refined samples needed by the kernel oracle come
    from trigonometric interpolation along ``x``.
    """

    field: PhaseSpaceField
    func: object = None
    kind = "grid"

    def render(self, grid):
        _same_grid(self.field.grid, grid)
        return self.field

    def evaluate(self, grid, x, p):
        if self.func is None:
            raise ValueError("grid symbol has no analytic form; use render()")
        return self.func(x, p) + 0j

    def render_refined(self, grid, refine):
        _same_grid(self.field.grid, grid)
        if self.func is not None:
            return super().render_refined(grid, refine)
        return np.stack([upsample(col, refine) for col in self.field.samples.T], axis=1)

    @classmethod
    def from_function(cls, grid, func):
        X, P = grid.mesh()
        return cls(PhaseSpaceField(grid, func(X, P)), func)


@dataclass(frozen=True)
class PlaneWave(SymbolSpec):
    """``exp(-i sigma(z, z1)/hbar)``; its sigma-Fourier transform is a delta at ``z1``."""

    z1: PhasePoint
    kind = "plane_wave"

    def evaluate(self, grid, x, p):
        return np.exp(-1j * (p * self.z1.x - self.z1.p * x) / grid.hbar)


@dataclass(frozen=True)
class GaussianSymbol(SymbolSpec):
    """``exp(-((x - x0)^2 + (p - p0)^2) / (2 width^2 hbar))``."""

    x0: float = 0.0
    p0: float = 0.0
    width: float = 1.0
    kind = "gaussian"

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")

    def evaluate(self, grid, x, p):
        r2 = (x - self.x0) ** 2 + (p - self.p0) ** 2
        return np.exp(-r2 / (2.0 * self.width ** 2 * grid.hbar)) + 0j


def gaussian_symbol(grid, x0=0.0, p0=0.0, width=1.0, amp=1.0):
    """Analytic Gaussian symbol centred at ``(x0, p0)``."""
    def f(x, p):
        return amp * np.exp(-((x - x0) ** 2 + (p - p0) ** 2) / (2.0 * width ** 2 * grid.hbar)) + 0j
    return GridSymbol.from_function(grid, f)


def render_symbol(symbol, grid) -> PhaseSpaceField:
    if isinstance(symbol, PhaseSpaceField):
        _same_grid(symbol.grid, grid)
        return symbol
    return symbol.render(grid)


# --- Heisenberg operators ----------------------------------------------------

@dataclass(frozen=True)
class HeisenbergParams:
    z0: PhasePoint
    tau: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "tau", _check_tau(self.tau))

    def lattice(self, grid):
        """Integer offsets ``(x0/dx, p0/dp)``; off-grid points raise with the nearest grid point."""
        try:
            sx = grid.index_of_x(self.z0.x)
            sp = grid.index_of_p(self.z0.p)
        except ValueError as exc:
            snap = PhasePoint(round(self.z0.x / grid.dx) * grid.dx, round(self.z0.p / grid.dp) * grid.dp)
            raise ValueError(f"z0={self.z0} is not a grid point ({exc}); snap to {snap}") from None
        return sx, sp


def _heisenberg_phase(grid, z0, tau):
    return np.exp(1j / grid.hbar * (z0.p * grid.x - (1.0 - tau) * z0.p * z0.x))


def heisenberg_apply(params: HeisenbergParams, psi: Signal) -> Signal:
    """``T_tau(z0) psi(x) = exp(i(p0 x - (1-tau) p0 x0)/hbar) psi(x - x0)`` with a circular shift."""
    grid = psi.grid
    sx, _ = params.lattice(grid)
    shifted = np.roll(psi.samples, sx)
    return Signal(grid, _heisenberg_phase(grid, params.z0, params.tau) * shifted)


def heisenberg_matrix(params: HeisenbergParams, grid: GridSpec) -> OperatorMatrix:
    sx, _ = params.lattice(grid)
    n = grid.n
    rows = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    out[rows, (rows - sx) % n] = _heisenberg_phase(grid, params.z0, params.tau) / grid.dx
    return OperatorMatrix(grid, out)


# --- harmonic-representation builders -------------------------------------------

def _aliasing(fsa):
    n = fsa.shape[0]
    band = max(1, int(round(n * _EDGE_BAND)))
    mag = np.abs(fsa)
    # the axes x0 = 0 and p0 = 0 carry pure multiplication operators in x and
    # in p, which are exact on the grid whatever their decay
    mag[n // 2, :] = 0.0
    mag[:, n // 2] = 0.0
    total = mag.max()
    if total == 0.0:
        return 0.0
    edge = max(mag[:band].max(), mag[-band:].max(), mag[:, :band].max(), mag[:, -band:].max())
    return float(edge / total)


def _assemble(fsa, mult, tau, grid):
    """Sum ``F_sigma a(z0) * mult(z0) * T_tau(z0)`` over all grid points ``z0``."""
    n = grid.n
    x, p = grid.x, grid.p
    coef = fsa * mult * np.exp(-1j / grid.hbar * (1.0 - tau) * np.outer(x, p)) / (n * grid.dx)
    phase = np.exp(1j / grid.hbar * np.outer(p, x))
    shift = np.arange(n, dtype=np.int64) - n // 2
    return _kernels.assemble_shifts(np.ascontiguousarray(coef), np.ascontiguousarray(phase), shift)


def _build(symbol, tau, grid, mult):
    a = render_symbol(symbol, grid)
    fsa = symplectic_fourier_array(a.samples, grid)
    edge = _aliasing(fsa)
    diag = {"aliasing_edge_fraction": edge, "aliasing_warning": edge > ALIASING_THRESHOLD}
    return OperatorMatrix(grid, _assemble(fsa, mult, tau, grid), diag)


def build_op_tau(symbol, tau, grid: GridSpec) -> OperatorMatrix:
    """Shubin tau-quantization of ``symbol`` via the harmonic representation.

    Parameters
    ----------
    symbol : SymbolSpec or PhaseSpaceField
    tau : float
        Any real value; ``1/2`` is Weyl, ``1`` Kohn-Nirenberg.
    grid : GridSpec

    Returns
    -------
    OperatorMatrix
        ``diagnostics['aliasing_warning']`` is set when the sigma-Fourier
        transform of the symbol reaches the edge of the grid.
    """
    tau = _check_tau(tau)
    return _build(symbol, tau, grid, 1.0)


def build_op_weyl(symbol, grid):
    return build_op_tau(symbol, 0.5, grid)


def build_op_bj(symbol, grid: GridSpec) -> OperatorMatrix:
    """Born-Jordan quantization, the average of ``Op_tau`` over ``tau`` in [0, 1].

    Realised as the Weyl harmonic sum weighted by ``Theta = sinc(px/2hbar)``.
    """
    theta = sinc_half(_px(grid) / (2.0 * grid.hbar))
    return _build(symbol, 0.5, grid, theta)


def bj_to_weyl_symbol(symbol: PhaseSpaceField) -> PhaseSpaceField:
    """Weyl symbol of ``Op_BJ(a)``: ``F_sigma(Theta * F_sigma a)``."""
    grid = symbol.grid
    theta = sinc_half(_px(grid) / (2.0 * grid.hbar))
    fsa = symplectic_fourier_array(symbol.samples, grid)
    return PhaseSpaceField(grid, symplectic_fourier_array(theta * fsa, grid))


# --- oracles -------------------------------------------------------------------

def _tau_fraction(tau_rational):
    if isinstance(tau_rational, Fraction):
        return tau_rational
    r, s = tau_rational
    if int(r) != r or int(s) != s or s <= 0:
        raise ValueError(f"tau must be r/s with integers, got {tau_rational!r}")
    return Fraction(int(r), int(s))


def kernel_tau_oracle(symbol, tau_rational, grid: GridSpec) -> OperatorMatrix:
    """Operator from the distributional kernel ``K_tau(x, y)``.

    ``M[i, j] = (dp/2 pi hbar) sum_l exp(i p_l (x_i - x_j)/hbar) a(tau x_i + (1-tau) x_j, p_l)``,
    with the symbol sampled on an ``s``-fold refined position lattice and the
    lag ``x_i - x_j`` taken as the periodic minimum image.

    Parameters
    ----------
    tau_rational : (int, int)
        ``tau = r/s`` with ``s`` in {1, 2, 4, 8}.
    """
    frac = _tau_fraction(tau_rational)
    s = frac.denominator
    if s not in (1, 2, 4, 8):
        raise ValueError(f"kernel oracle needs tau = r/s with s in {{1, 2, 4, 8}}, got {frac}")
    r = frac.numerator
    n = grid.n
    if isinstance(symbol, PhaseSpaceField):
        symbol = GridSymbol(symbol)
    if not 0 <= r <= s:
        raise ValueError("kernel oracle supports 0 <= tau <= 1")
    aref = symbol.render_refined(grid, s)
    # b[q, d] = sum_l exp(2 pi i (l - n/2) d / n) a[q, l]
    b = n * np.fft.ifft(np.fft.ifftshift(aref, axes=1), axis=1)
    # the p-sum is n-periodic in the lag, so use the minimum-image lag
    # d = x_i - x_j in [-n/2, n/2); the point tau*x_i + (1-tau)*x_j is then
    # x_i - (1-tau)*d, i.e. refined index s*i - (s-r)*d taken periodically
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    d = (i - j + n // 2) % n - n // 2
    q = (s * i - (s - r) * d) % (s * n)
    m = b[q, d % n] * (grid.dp / (2.0 * math.pi * grid.hbar))
    return OperatorMatrix(grid, m)


def weak_matrix_element(symbol, psi: Signal, phi: Signal, tau) -> complex:
    """Distributional bracket ``<a, W_tau(psi, phi)> = dx dp sum a W_tau`` (no conjugation).

    Equals ``(Op_tau(a) psi | phi)``.
    """
    grid = psi.grid
    a = render_symbol(symbol, grid)
    w = tau_wigner(psi, phi, tau)
    return complex(grid.dx * grid.dp * np.sum(a.samples * w.samples))


def weak_matrix_element_bj(symbol, psi: Signal, phi: Signal) -> complex:
    """Born-Jordan bracket ``<a, Q(psi, phi)>``."""
    grid = psi.grid
    a = render_symbol(symbol, grid)
    q = born_jordan_distribution(psi, phi)
    return complex(grid.dx * grid.dp * np.sum(a.samples * q.samples))


# --- direct spectral constructions -------------------------------------------

def _dft_matrix(grid):
    """Unitary centred DFT on sample vectors: ``(U v)_k = n^-1/2 sum_j exp(-i p_k x_j/hbar) v_j``."""
    return cfft(np.eye(grid.n), axis=0) / math.sqrt(grid.n)


def spectral_p(grid):
    """Sample-space matrix of ``p = -i hbar d/dx`` as multiplication by ``p_k`` in Fourier space."""
    u = _dft_matrix(grid)
    return np.conj(u).T @ (grid.p[:, None] * u)


def spectral_function_of_p(grid, values):
    u = _dft_matrix(grid)
    return np.conj(u).T @ (np.asarray(values)[:, None] * u)


def quantize_named(symbol, grid: GridSpec) -> OperatorMatrix:
    """Direct textbook quantization of kinetic, magnetic and quadratic Hamiltonians.

    ``p^2`` acts by spectral multiplication, ``V`` and ``A`` as diagonal
    multipliers, and the magnetic cross term as ``-(pA + Ap)/2m``.
    """
    x = grid.x
    p_mat = spectral_p(grid)
    p2 = spectral_function_of_p(grid, grid.p ** 2)
    if isinstance(symbol, KineticPotential):
        h = p2 / (2.0 * symbol.mass) + np.diag(evaluate(symbol.potential, x))
    elif isinstance(symbol, Magnetic):
        av = evaluate(symbol.vector_potential, x)
        v = evaluate(symbol.potential, x)
        am = np.diag(av)
        cross = p_mat @ am + am @ p_mat
        h = (p2 - cross + np.diag(av ** 2)) / (2.0 * symbol.mass) + np.diag(v)
    elif isinstance(symbol, Quadratic):
        (a, b), (_, c) = symbol.M
        xm = np.diag(x)
        h = 0.5 * a * xm @ xm + 0.5 * b * (xm @ p_mat + p_mat @ xm) + 0.5 * c * p2
    else:
        raise TypeError(f"quantize_named handles kinetic, magnetic and quadratic symbols, not {type(symbol).__name__}")
    return OperatorMatrix(grid, h / grid.dx)


def harmonic_oscillator():
    return Quadratic(((1.0, 0.0), (0.0, 1.0)))
