import json
from pathlib import Path

import numpy as np
import pytest

from phasequant.cli import main
from phasequant.io import read_field, read_operator, read_signal

DATA = Path(__file__).resolve().parent.parent / "data"
SMALL = ["--n", "64", "--x-min", "-8", "--x-max", "8"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("rule, m, n, expected", [
    ("bj", 1, 1, "(1/2)*(X P + P X)"),
    ("weyl", 1, 1, "(1/2)*(X P + P X)"),
    ("kn", 2, 1, "X^2 P"),
])
def test_order_literal(capsys, rule, m, n, expected):
    code, out, _ = run(capsys, "order", "--rule", rule, "--m", m, "--n", n)
    assert code == 0 and out.strip() == expected


def test_order_tau_exact(capsys):
    code, out, _ = run(capsys, "order", "--rule", "tau", "--m", 1, "--n", 1, "--tau", "1/2", "--normal")
    assert code == 0
    _, ref, _ = run(capsys, "order", "--rule", "weyl", "--m", 1, "--n", 1, "--normal")
    assert out == ref


def test_order_tau_must_be_exact(capsys):
    code, _, err = run(capsys, "order", "--rule", "tau", "--m", 1, "--n", 1, "--tau", "abc")
    assert code == 2 and "tau" in err
    code, _, _ = run(capsys, "order", "--rule", "bj", "--m", 1, "--n", 1, "--tau", "1/2")
    assert code == 2


def test_gen_and_distributions(capsys, tmp_path):
    psi = tmp_path / "psi.csv"
    assert run(capsys, "gen", "--kind", "gaussian", "--center", 1.0, "-o", psi, *SMALL)[0] == 0
    sig = read_signal(psi)
    assert sig.grid.n == 64 and abs(sig.norm() - 1) < 1e-12
    for cmd, extra in (("wigner", []), ("tauwig", ["--tau", "0.3"]), ("bjdist", []), ("ambiguity", [])):
        out = tmp_path / f"{cmd}.csv"
        code, _, _ = run(capsys, cmd, "--psi", psi, "-o", out, "--plot", tmp_path / f"{cmd}.gp", *extra)
        assert code == 0
        f = read_field(out)
        assert f.samples.shape == (64, 64)
        assert (tmp_path / f"{cmd}.gp").exists()
    w = read_field(tmp_path / "wigner.csv")
    assert np.max(np.abs(w.samples.imag)) < 1e-12


def test_quantize_plane_wave_sidecar(capsys, tmp_path):
    op = tmp_path / "op.csv"
    code, _, _ = run(capsys, "quantize", "--scheme", "bj", "--symbol", DATA / "planewave_theta_zero.json", "-o", op)
    assert code == 0
    side = json.loads((tmp_path / "op.csv.json").read_text())
    assert side["scheme"] == "bj" and side["frobenius_norm"] <= 1e-8
    assert read_operator(op).grid.n == 256


def test_quantize_apply(capsys, tmp_path):
    psi = tmp_path / "psi.csv"
    run(capsys, "gen", "--kind", "hermite", "--order", 0, "-o", psi, *SMALL)
    op, out = tmp_path / "op.csv", tmp_path / "out.csv"
    code, _, _ = run(capsys, "quantize", "--scheme", "weyl", "--symbol", DATA / "harmonic.json",
                     "-o", op, "--apply", psi, "-o", out)
    assert code == 0
    # the ground state of (x^2 + p^2)/2 has eigenvalue hbar/2
    phi, h0 = read_signal(out), read_signal(psi)
    assert np.max(np.abs(phi.samples - 0.5 * h0.samples)) < 1e-8


def test_quantize_tau_needs_value(capsys, tmp_path):
    code, _, err = run(capsys, "quantize", "--scheme", "tau", "--symbol", DATA / "harmonic.json",
                       "-o", tmp_path / "op.csv", *SMALL)
    assert code == 2 and "--tau" in err


def test_bad_config_exits_2(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"n": 100}}))
    code, _, err = run(capsys, "verify", "--suite", "moyal", "--config", cfg)
    assert code == 2 and "power of two" in err


def test_bad_expression_exits_2(capsys, tmp_path):
    sym = tmp_path / "s.json"
    sym.write_text(json.dumps({"type": "kinetic_potential", "mass": 1.0, "potential": "x^2 */ 2"}))
    code, _, err = run(capsys, "quantize", "--scheme", "weyl", "--symbol", sym, "-o", tmp_path / "o.csv", *SMALL)
    assert code == 2 and "position" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "wigner", "--psi", tmp_path / "none.csv", "-o", tmp_path / "w.csv")
    assert code == 2


def test_verify_moyal_deterministic(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"n": 128, "x_min": -12, "x_max": 12}}))
    code1, out1, _ = run(capsys, "verify", "--suite", "moyal", "--config", cfg)
    code2, out2, _ = run(capsys, "verify", "--suite", "moyal", "--config", cfg, "--report", tmp_path / "r.json")
    assert code1 == code2 == 0
    assert out1 == out2 == (tmp_path / "r.json").read_text()
    assert json.loads(out1)["pass"] is True


def test_verify_failure_exits_1(capsys):
    # the full-grid Simpson check of the theta multiplier does not reach its tolerance
    code, out, err = run(capsys, "verify", "--suite", "bj-oracle")
    assert code == 1
    assert json.loads(out)["pass"] is False
    assert "verification failed" in err


def test_threads_flag(capsys):
    assert run(capsys, "--threads", 0, "order", "--rule", "bj", "--m", 1, "--n", 1)[0] == 2
    assert run(capsys, "--threads", 1, "order", "--rule", "bj", "--m", 1, "--n", 1)[0] == 0
