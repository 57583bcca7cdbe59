"""tau-quadrature oracles for the Born-Jordan averages."""
from __future__ import annotations

import math

import numpy as np

from .grid import GridSpec, PhaseSpaceField
from .quantizers import OperatorMatrix, build_op_tau
from .transforms import _px, tau_wigner


def simpson_rule(nodes):
    """Composite Simpson nodes and weights on [0, 1]; ``nodes`` must be odd and >= 3."""
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError("Simpson's rule needs an odd node count >= 3")
    t = np.linspace(0.0, 1.0, nodes)
    w = np.ones(nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return t, w / (3.0 * (nodes - 1))


def simpson_theta(grid: GridSpec, nodes=129):
    """Simpson approximation of ``int_0^1 exp(i(2tau-1)px/2hbar) dtau`` on the grid."""
    u = _px(grid) / (2.0 * grid.hbar)
    t, w = simpson_rule(nodes)
    out = np.zeros_like(u, dtype=np.complex128)
    for ti, wi in zip(t, w):
        out += wi * np.exp(1j * (2.0 * ti - 1.0) * u)
    return out


def simpson_theta_bound(grid: GridSpec, nodes=129):
    """Pointwise Simpson error bound ``sqrt(2) h^4 (2u)^4 / 180`` for the phase integral."""
    u = _px(grid) / (2.0 * grid.hbar)
    h = 1.0 / (nodes - 1)
    return math.sqrt(2.0) * h ** 4 * (2.0 * u) ** 4 / 180.0


def simpson_bj_operator(symbol, grid: GridSpec, nodes=65) -> OperatorMatrix:
    t, w = simpson_rule(nodes)
    acc = np.zeros((grid.n, grid.n), dtype=np.complex128)
    for ti, wi in zip(t, w):
        acc += wi * build_op_tau(symbol, ti, grid).entries
    return OperatorMatrix(grid, acc)


def simpson_bj_distribution(psi, phi, nodes=65) -> PhaseSpaceField:
    t, w = simpson_rule(nodes)
    acc = np.zeros((psi.grid.n, psi.grid.n), dtype=np.complex128)
    for ti, wi in zip(t, w):
        acc += wi * tau_wigner(psi, phi, ti).samples
    return PhaseSpaceField(psi.grid, acc)
