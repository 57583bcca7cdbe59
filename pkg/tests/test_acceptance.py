"""Exit criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -m acceptance -s`` (the lines are printed even without -s).
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import hermite_probes
from phasequant.config import config_from_dict
from phasequant.grid import GridSpec, PhaseSpaceField, l2_inner
from phasequant.oracles import simpson_bj_operator
from phasequant.quantizers import (
    GaussianSymbol,
    GridSymbol,
    KineticPotential,
    Magnetic,
    Quadratic,
    build_op_bj,
    build_op_tau,
    frobenius_rel,
    harmonic_oscillator,
    kernel_tau_oracle,
    probe_rel,
    quantize_named,
    weak_matrix_element,
)
from phasequant.signals import Hermite
from phasequant.symbolic import (
    HBAR,
    born_jordan_p_form,
    born_jordan_x_form,
    integrate_tau,
    normal_form,
    order_monomial,
    shubin_tau_p_form,
    shubin_tau_x_form,
    substitute_tau,
)
from phasequant.verify import interference_report, random_gaussian, run_suite

pytestmark = pytest.mark.acceptance

RANGE = range(7)
ORACLE_TAUS = ((0, 1), (1, 4), (1, 2), (3, 4), (1, 1))
# peak |Q| / peak |W| in the midpoint strip, frozen from the first run at hbar = 1
GOLDEN_INTERFERENCE_RATIO = 0.2294275261198545


@pytest.fixture(scope="module")
def default_cfg():
    return config_from_dict({})


@pytest.fixture(scope="module")
def report_line(request):
    def emit(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        return ok
    return emit


def _worst(report):
    return "; ".join(f"{r['identity']}(tau={r['tau']}) {r['residual']:.2e}/{r['tolerance']:.0e}"
                     for r in report["records"] if not r["pass"]) or "all records within tolerance"


def test_criterion_01_symbolic(report_line):
    t0 = time.perf_counter()
    nf = normal_form
    a = b = c = d = True
    weyl_eq_bj = {}
    for m in RANGE:
        for n in RANGE:
            tx = nf(shubin_tau_x_form(m, n))
            a &= tx == nf(shubin_tau_p_form(m, n))
            bj = nf(born_jordan_p_form(m, n))
            b &= integrate_tau(tx) == bj
            weyl = nf(order_monomial("weyl", m, n))
            c &= substitute_tau(tx, Fraction(1, 2)) == weyl
            d &= bj == nf(born_jordan_x_form(m, n))
            weyl_eq_bj[m, n] = weyl == bj
    diff22 = nf(order_monomial("weyl", 2, 2)) - nf(order_monomial("bj", 2, 2))
    pure_h2 = diff22 == Fraction(1, 6) * HBAR ** 2
    mismatched = sorted(k for k, eq in weyl_eq_bj.items() if eq != (sum(k) <= 2))
    e = not mismatched and pure_h2
    runtime = time.perf_counter() - t0
    report_line("1a", a, "tau-expansions in x-form and p-form agree for 0 <= m,n <= 6")
    report_line("1b", b, "tau-integral of the expansion equals the Born-Jordan rule")
    report_line("1c", c, "tau = 1/2 substitution equals the Weyl rule")
    report_line("1d", d, "the two symmetric Born-Jordan forms coincide")
    report_line("1e", e, f"Weyl = BJ iff m+n <= 2; (2,2) difference pure hbar^2: {pure_h2}; "
                f"{len(mismatched)} (m,n) pairs break the 'iff', e.g. {mismatched[:4]} "
                "(Weyl and BJ coincide whenever min(m,n) <= 1)")
    report_line("1-runtime", runtime < 5.0, f"{runtime:.2f} s (limit 5 s)")
    assert a and b and c and d and runtime < 5.0
    assert e, f"Weyl = BJ also holds for m+n > 2 at {mismatched}"


def test_criterion_02_moyal(default_cfg, report_line):
    t0 = time.perf_counter()
    rep = run_suite("moyal", default_cfg)
    runtime = time.perf_counter() - t0
    worst = max(r["residual"] for r in rep["records"])
    ok = rep["pass"] and runtime < 30.0
    report_line(2, ok, f"20 Gaussian quadruples x tau in {{0, 0.3, 0.5, 1}}: worst rel err {worst:.2e} "
                f"(tol 1e-8), {runtime:.1f} s")
    assert ok, _worst(rep)


def test_criterion_03_marginals(default_cfg, report_line):
    rep = run_suite("marginals", default_cfg)
    worst = max(r["residual"] for r in rep["records"])
    report_line(3, rep["pass"], f"Gaussian, h0..h3 at 5 taus plus Q: worst l1 error {worst:.2e} (tol 1e-6)")
    assert rep["pass"], _worst(rep)


def test_criterion_04_theta_oracle(default_cfg, report_line):
    rep = run_suite("bj-oracle", default_cfg)
    rec = {r["identity"]: r for r in rep["records"]}
    theta = rec["theta-simpson-129"]
    report_line("4a", theta["pass"],
                f"sinc vs 129-node Simpson over the full grid: max err {theta['residual']:.2e} (tol 1e-10); "
                "px/2hbar reaches pi*n/4 on the grid, beyond what 129 nodes resolve")
    bound = rec["theta-simpson-error-bound"]
    report_line("4a-bound", bound["pass"], "pointwise error stays inside the Simpson error bound")
    op = rec["bj-operator-simpson-65"]
    report_line("4b", op["pass"], f"build_op_bj vs 65-node Simpson of build_op_tau: {op['residual']:.2e} (tol 1e-6)")
    dist = rec["bj-distribution-simpson-65"]
    report_line("4c", dist["pass"], f"BJ distribution vs 65-node Simpson: {dist['residual']:.2e} (tol 1e-6)")
    assert op["pass"] and dist["pass"] and bound["pass"]
    assert theta["pass"], f"full-grid Simpson error {theta['residual']:.3g} > 1e-10"


def test_criterion_05_dual_routes(default_cfg, report_line):
    grid = default_cfg.grid
    rng = np.random.default_rng(default_cfg.seed)
    sym = GaussianSymbol(0.3, 0.4, 1.0)
    weak = 0.0
    for tau in (0.0, 0.3, 0.5, 1.0):
        op = build_op_tau(sym, tau, grid)
        for _ in range(10):
            psi, phi = random_gaussian(rng, grid), random_gaussian(rng, grid)
            ref = l2_inner(op.apply(psi), phi)
            weak = max(weak, abs(weak_matrix_element(sym, psi, phi, tau) - ref) / abs(ref))
    gfield = GridSymbol(GaussianSymbol(0.5, -0.25, 1.2).render(grid))
    quad = Quadratic(((1.0, 0.3), (0.3, 0.5)))
    kern = {}
    for name, s in (("quadratic", quad), ("gaussian-grid", gfield)):
        kern[name] = max(frobenius_rel(build_op_tau(s, r / q, grid), kernel_tau_oracle(s, (r, q), grid))
                         for r, q in ORACLE_TAUS)
    ok_weak = weak <= 1e-6
    ok_kern = all(v <= 1e-6 for v in kern.values())
    report_line("5a", ok_weak, f"build_op_tau vs weak matrix elements, 10 Gaussian pairs: {weak:.2e} (tol 1e-6)")
    report_line("5b", ok_kern, "build_op_tau vs kernel oracle at tau in {0, 1/4, 1/2, 3/4, 1}: "
                + ", ".join(f"{k} {v:.2e}" for k, v in kern.items()) + " (tol 1e-6)")
    assert ok_weak and ok_kern


def test_criterion_06_adjoints(default_cfg, report_line):
    rep = run_suite("adjoints", default_cfg)
    detail = ", ".join(f"{r['identity']} {r['residual']:.1e}" for r in rep["records"])
    report_line(6, rep["pass"], detail)
    assert rep["pass"], _worst(rep)


def test_criterion_07_covariance(default_cfg, report_line):
    rep = run_suite("covariance", default_cfg)
    witness = [r for r in rep["records"] if r["identity"].startswith("weyl-uniqueness")]
    detail = f"{len(rep['records'])} records; uniqueness witness " + ", ".join(
        f"tau={r['tau']} residual {r['params'].get('covariance_residual', r['residual']):.2e}" for r in witness)
    report_line(7, rep["pass"], detail)
    assert rep["pass"], _worst(rep)


def test_criterion_08_physics(default_cfg, report_line):
    grid = default_cfg.grid
    h = quantize_named(harmonic_oscillator(), grid)
    eig = 0.0
    for k in range(6):
        hk = Hermite(k, grid.hbar).sample(grid)
        res = h.apply(hk).samples - (k + 0.5) * grid.hbar * hk.samples
        eig = max(eig, float(np.linalg.norm(res) / np.linalg.norm(hk.samples)))
    kp = KineticPotential(1.0, "x^2/2 + 0.1*x^4")
    named_kp = quantize_named(kp, grid)
    kp_err = max(frobenius_rel(named_kp, build_op_bj(kp, grid)), frobenius_rel(named_kp, build_op_tau(kp, 0.5, grid)))
    mag = Magnetic(1.0, "0.5*x", "0")
    named_mag = quantize_named(mag, grid)
    probes = hermite_probes(grid)
    mag_err = max(probe_rel(build_op_bj(mag, grid), named_mag, probes),
                  probe_rel(build_op_tau(mag, 0.5, grid), named_mag, probes))
    ok = eig <= 1e-6 and kp_err <= 1e-6 and mag_err <= 1e-6
    report_line(8, ok, f"HO eigen-residual n<=5 {eig:.2e}; kinetic+potential {kp_err:.2e} (Frobenius); "
                f"magnetic {mag_err:.2e} (Hermite-probe metric); tol 1e-6")
    assert ok


def test_criterion_09_noninvertibility(default_cfg, report_line):
    rep = run_suite("noninvert", default_cfg)
    detail = ", ".join(f"{r['identity']} {r['residual']:.1e}" for r in rep["records"])
    report_line(9, rep["pass"], detail)
    assert rep["pass"], _worst(rep)


def test_criterion_10_interference(default_cfg, report_line):
    rep = interference_report(default_cfg.grid)
    ok = rep["ratio"] < 1.0 and rep["ratio"] == pytest.approx(GOLDEN_INTERFERENCE_RATIO, rel=1e-9)
    report_line(10, ok, f"peak|Q|/peak|W| in |x| < {rep['strip']} for separation {rep['separation']}: "
                f"{rep['ratio']:.6f} (golden {GOLDEN_INTERFERENCE_RATIO:.6f})")
    assert ok


@pytest.mark.parametrize("suite", ["moyal", "marginals", "bj-oracle"])
def test_criterion_11_hbar_independence(suite, report_line):
    cfg = config_from_dict({"grid": {"hbar": 1.0 / (2.0 * math.pi)}})
    rep = run_suite(suite, cfg)
    report_line(f"11/{suite}", rep["pass"], f"hbar = 1/2pi: {_worst(rep)}")
    assert rep["pass"], _worst(rep)
