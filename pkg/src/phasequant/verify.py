"""Invariant-verification suites behind ``phasequant verify``.

Each suite returns a list of :class:`~phasequant.covariance.Residual`
records. Random draws come from one ``numpy.random.Generator`` seeded by the
configuration, so reports are reproducible byte for byte.
"""
from __future__ import annotations

import math

import numpy as np

from .config import RunConfig
from .covariance import (
    MetalinearElement,
    Residual,
    check_fourier_op_covariance,
    check_fourier_wigner_covariance,
    check_metalinear_covariance,
    check_weyl_uniqueness_witness,
)
from .grid import GridSpec, PhasePoint, PhaseSpaceField, Signal, fourier, l2_inner, phase_space_inner
from .oracles import simpson_bj_distribution, simpson_bj_operator, simpson_theta, simpson_theta_bound
from .quantizers import (
    GaussianSymbol,
    GridSymbol,
    HeisenbergParams,
    PlaneWave,
    bj_to_weyl_symbol,
    build_op_bj,
    build_op_tau,
    frobenius_rel,
    heisenberg_matrix,
)
from .signals import Gaussian, Hermite, two_gaussian
from .transforms import born_jordan_distribution, cross_wigner, marginals, theta_multiplier, tau_wigner

SUITES = ("moyal", "marginals", "covariance", "adjoints", "bj-oracle", "noninvert")

MOYAL_TAUS = (0.0, 0.3, 0.5, 1.0)
MARGINAL_TAUS = (0.0, 0.25, 0.5, 0.75, 1.0)


def random_gaussian(rng, grid: GridSpec) -> Signal:
    """Normalised Gaussian with random width, centre and mean momentum (scaled by sqrt(hbar))."""
    s = math.sqrt(grid.hbar)
    a = complex(rng.uniform(0.6, 1.6), rng.uniform(-0.3, 0.3))
    g = Gaussian.normalized(a, s * rng.uniform(-1.5, 1.5), s * rng.uniform(-1.0, 1.0), grid.hbar)
    return g.sample(grid)


def random_grid_point(rng, grid, span=12):
    return PhasePoint(int(rng.integers(-span, span + 1)) * grid.dx, int(rng.integers(-span, span + 1)) * grid.dp)


# --- suites -------------------------------------------------------------------

def suite_moyal(cfg: RunConfig, rng):
    grid = cfg.grid
    count = int(cfg.suite("moyal").get("quadruples", 20))
    quads = [[random_gaussian(rng, grid) for _ in range(4)] for _ in range(count)]
    out = []
    for tau in MOYAL_TAUS:
        worst = 0.0
        for psi, phi, psi2, phi2 in quads:
            lhs = phase_space_inner(tau_wigner(psi, phi, tau), tau_wigner(psi2, phi2, tau))
            rhs = l2_inner(psi, psi2) * np.conj(l2_inner(phi, phi2)) / (2.0 * math.pi * grid.hbar)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        out.append(Residual("moyal", tau, {"quadruples": count, "hbar": grid.hbar}, worst, 1e-8))
    return out


def marginal_errors(dist: PhaseSpaceField, psi: Signal):
    g = psi.grid
    mx, mp = marginals(dist)
    ex = g.dx * np.sum(np.abs(mx - np.abs(psi.samples) ** 2))
    ep = g.dp * np.sum(np.abs(mp - np.abs(fourier(psi).samples) ** 2))
    return float(ex), float(ep)


def marginal_signals(grid):
    s = math.sqrt(grid.hbar)
    sigs = {"gaussian": Gaussian.normalized(1.3, 0.8 * s, -0.5 * s, grid.hbar).sample(grid)}
    for k in range(4):
        sigs[f"hermite{k}"] = Hermite(k, grid.hbar).sample(grid)
    return sigs


def suite_marginals(cfg: RunConfig, rng):
    grid = cfg.grid
    sigs = marginal_signals(grid)
    out = []
    for tau in MARGINAL_TAUS + ("bj",):
        worst = 0.0
        for psi in sigs.values():
            dist = born_jordan_distribution(psi, psi) if tau == "bj" else tau_wigner(psi, psi, tau)
            worst = max(worst, *marginal_errors(dist, psi))
        name = "marginals-bj" if tau == "bj" else "marginals"
        out.append(Residual(name, None if tau == "bj" else tau,
                            {"signals": sorted(sigs), "hbar": grid.hbar}, worst, 1e-6))
    return out


def suite_covariance(cfg: RunConfig, rng):
    hbar = cfg.grid.hbar
    n = cfg.grid.n
    sq = GridSpec.square(n, hbar)
    s = math.sqrt(hbar)
    psi = Gaussian.normalized(1.2, 0.5 * s, -0.3 * s, hbar)
    phi = Gaussian.normalized(complex(0.8, 0.2), -0.4 * s, 0.6 * s, hbar)
    out = []
    for tau in (0.5, 0.0, 0.3, 1.0):
        out.append(check_fourier_wigner_covariance(psi, phi, tau, sq))
    out.append(check_fourier_wigner_covariance(Hermite(1, hbar), Hermite(1, hbar), 0.2, sq))
    sym = GaussianSymbol(0.7 * s, -0.4 * s, 1.0)
    for tau in (0.5, 0.0):
        out.append(check_fourier_op_covariance(sym, tau, sq))
    out.append(check_fourier_op_covariance(sym, None, sq, born_jordan=True))

    def asym(x, p):
        return np.exp(-((x - 0.7 * s) ** 2 + (p + 0.4 * s) ** 2) / (2.0 * hbar)) + 0j

    for L, mu in ((-1.0, 1), (2.0, 0), (0.5, 0)):
        elem = MetalinearElement(L, mu)
        out.extend(check_metalinear_covariance(elem, psi, phi, 0.3, cfg.grid, symbol=asym, tol_dist=1e-6))
        out.extend(check_metalinear_covariance(elem, psi, phi, 0.3, cfg.grid, symbol=asym,
                                               born_jordan=True, tol_dist=1e-6))
    for tau in (0.5, 0.0, 1.0):
        out.append(check_weyl_uniqueness_witness(tau, sq))
    return out


def suite_adjoints(cfg: RunConfig, rng):
    grid = cfg.grid
    out = []
    worst = 0.0
    for tau in (0.0, 0.3, 1.0):
        for _ in range(10):
            z = random_grid_point(rng, grid)
            a = heisenberg_matrix(HeisenbergParams(z, tau), grid).adjoint().entries
            b = heisenberg_matrix(HeisenbergParams(-z, 1.0 - tau), grid).entries
            worst = max(worst, float(np.abs(a - b).max() * grid.dx))
    out.append(Residual("heisenberg-adjoint", None, {"pairs": 30}, worst, 1e-10))

    s = math.sqrt(grid.hbar)
    base = GaussianSymbol(0.6 * s, -0.3 * s, 1.2).render(grid)
    X, P = grid.mesh()
    complex_sym = PhaseSpaceField(grid, base.samples * np.exp(0.4j * X * P / grid.hbar + 0.3j * X / s))
    for tau in (0.0, 0.3, 1.0):
        lhs = build_op_tau(complex_sym, tau, grid).adjoint()
        rhs = build_op_tau(complex_sym.conj(), 1.0 - tau, grid)
        out.append(Residual("op-tau-adjoint", tau, {}, frobenius_rel(lhs, rhs), 1e-6))
    bj = build_op_bj(base, grid)
    out.append(Residual("bj-hermitian", None, {}, frobenius_rel(bj.adjoint(), bj), 1e-8))

    worst = 0.0
    for tau in (0.0, 0.3, 1.0):
        for _ in range(10):
            z0, z1 = random_grid_point(rng, grid), random_grid_point(rng, grid)
            t0 = heisenberg_matrix(HeisenbergParams(z0, tau), grid)
            t1 = heisenberg_matrix(HeisenbergParams(z1, tau), grid)
            ph = np.exp(1j * (z0.p * z1.x - z1.p * z0.x) / grid.hbar)
            d = t0.compose(t1).entries - ph * t1.compose(t0).entries
            worst = max(worst, float(np.abs(d).max() * grid.dx))
    out.append(Residual("commutation", None, {"pairs": 30}, worst, 1e-10))
    return out


def suite_bj_oracle(cfg: RunConfig, rng):
    grid = cfg.grid
    out = []
    theta = theta_multiplier(grid).samples
    simp = simpson_theta(grid, 129)
    diff = np.abs(theta - simp)
    out.append(Residual("theta-simpson-129", None, {"nodes": 129, "region": "full grid"},
                        float(diff.max()), 1e-10))
    excess = float(np.max(diff - simpson_theta_bound(grid, 129)))
    out.append(Residual("theta-simpson-error-bound", None, {"nodes": 129}, max(excess, 0.0), 1e-13))
    s = math.sqrt(grid.hbar)
    sym = GaussianSymbol(0.5 * s, 0.25 * s, 1.0)
    out.append(Residual("bj-operator-simpson-65", None, {"nodes": 65},
                        frobenius_rel(build_op_bj(sym, grid), simpson_bj_operator(sym, grid, 65)), 1e-6))
    psi = Gaussian.normalized(1.0, 0.5 * s, 0.0, grid.hbar).sample(grid)
    q = born_jordan_distribution(psi, psi).samples
    qs = simpson_bj_distribution(psi, psi, 65).samples
    out.append(Residual("bj-distribution-simpson-65", None, {"nodes": 65}, float(np.abs(q - qs).max()), 1e-6))
    return out


def plane_wave_witness(grid: GridSpec) -> PlaneWave:
    """Plane-wave symbol at a grid point with ``p1 x1 = 2 pi hbar`` (a zero of Theta)."""
    # p1 x1 = (a dp)(b dx) = 2 pi hbar a b / n, so a b = n
    a = 1 << (int(math.log2(grid.n)) // 2)
    b = grid.n // a
    return PlaneWave(PhasePoint(b * grid.dx, a * grid.dp))


def suite_noninvert(cfg: RunConfig, rng):
    grid = cfg.grid
    pw = plane_wave_witness(grid)
    weyl = build_op_tau(pw, 0.5, grid)
    bj = build_op_bj(pw, grid)
    unit = math.sqrt(grid.n) / grid.dx  # Frobenius norm of a phase-permutation in dx semantics
    params = {"x1": pw.z1.x, "p1": pw.z1.p, "p1x1_over_2pi_hbar": pw.z1.x * pw.z1.p / (2 * math.pi * grid.hbar)}
    return [
        Residual("noninvert-bj-norm", None, params, bj.frobenius() / weyl.frobenius(), 1e-8),
        Residual("noninvert-weyl-unitary", None, params, abs(weyl.frobenius() - unit) / unit, 1e-10),
        Residual("noninvert-weyl-symbol", None, params,
                 float(np.abs(bj_to_weyl_symbol(pw.render(grid)).samples).max()), 1e-8),
    ]


_RUNNERS = {
    "moyal": suite_moyal,
    "marginals": suite_marginals,
    "covariance": suite_covariance,
    "adjoints": suite_adjoints,
    "bj-oracle": suite_bj_oracle,
    "noninvert": suite_noninvert,
}


def run_suite(name: str, cfg: RunConfig) -> dict:
    """Run one suite (or ``all``) and return a JSON-ready report."""
    names = SUITES if name == "all" else (name,)
    unknown = [n for n in names if n not in _RUNNERS]
    if unknown:
        raise KeyError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)} or all")
    records = []
    for n in names:
        rng = np.random.default_rng(cfg.seed)
        for r in _RUNNERS[n](cfg, rng):
            rec = r.to_dict()
            rec["suite"] = n
            records.append(rec)
    return {
        "suite": name,
        "seed": cfg.seed,
        "grid": cfg.grid.to_dict(),
        "records": records,
        "pass": all(r["pass"] for r in records),
    }


def interference_report(grid: GridSpec, separation=8.0, strip=1.0) -> dict:
    """Peak ``|Q|`` over peak ``|W|`` in the strip ``|x| < strip`` for a two-Gaussian state."""
    psi = two_gaussian(separation, grid.hbar).sample(grid)
    w = np.abs(cross_wigner(psi, psi).samples)
    q = np.abs(born_jordan_distribution(psi, psi).samples)
    mask = np.abs(grid.x) < strip
    pw, pq = float(w[mask].max()), float(q[mask].max())
    return {"separation": separation, "strip": strip, "peak_wigner": pw, "peak_born_jordan": pq,
            "ratio": pq / pw}
