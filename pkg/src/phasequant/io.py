"""CSV/JSON serialization of signals, fields, operators and symbols.

Every CSV starts with a ``#`` line holding the grid as JSON, followed by a
header row. Numbers are written with 17 significant digits, which
round-trips IEEE doubles exactly.
"""
from __future__ import annotations

import csv
import json
import os

import numpy as np

from .expr import render_expr
from .grid import GridSpec, PhasePoint, PhaseSpaceField, Signal
from .quantizers import (
    GridSymbol,
    KineticPotential,
    Magnetic,
    Monomial,
    OperatorMatrix,
    PlaneWave,
    Quadratic,
    GaussianSymbol,
)


class FormatError(ValueError):
    pass


def _fmt(v):
    return format(float(v), ".17g")


def _write(path, grid, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(grid.to_dict(), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read(path, header):
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise FormatError(f"{path}: missing '#' grid header line")
        try:
            grid = GridSpec(**json.loads(first[1:]))
        except (json.JSONDecodeError, TypeError) as exc:
            raise FormatError(f"{path}: bad grid header: {exc}") from None
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise FormatError(f"{path}: expected header {','.join(header)}, got {got}")
        rows = [r for r in reader if r]
    return grid, rows


def write_signal(path, psi: Signal):
    x = psi.grid.x
    _write(path, psi.grid, ["x", "re", "im"],
           ([_fmt(x[i]), _fmt(v.real), _fmt(v.imag)] for i, v in enumerate(psi.samples)))


def read_signal(path) -> Signal:
    grid, rows = _read(path, ["x", "re", "im"])
    if len(rows) != grid.n:
        raise FormatError(f"{path}: expected {grid.n} rows, got {len(rows)}")
    vals = np.array([complex(float(r[1]), float(r[2])) for r in rows])
    return Signal(grid, vals)


def write_field(path, f: PhaseSpaceField):
    x, p = f.grid.x, f.grid.p
    n = f.grid.n

    def rows():
        for i in range(n):
            xi = _fmt(x[i])
            for k in range(n):
                v = f.samples[i, k]
                yield [xi, _fmt(p[k]), _fmt(v.real), _fmt(v.imag)]

    _write(path, f.grid, ["x", "p", "re", "im"], rows())


def read_field(path) -> PhaseSpaceField:
    grid, rows = _read(path, ["x", "p", "re", "im"])
    n = grid.n
    if len(rows) != n * n:
        raise FormatError(f"{path}: expected {n * n} rows, got {len(rows)}")
    vals = np.array([complex(float(r[2]), float(r[3])) for r in rows]).reshape(n, n)
    return PhaseSpaceField(grid, vals)


def write_operator(path, op: OperatorMatrix):
    n = op.grid.n

    def rows():
        for i in range(n):
            for j in range(n):
                v = op.entries[i, j]
                yield [i, j, _fmt(v.real), _fmt(v.imag)]

    _write(path, op.grid, ["i", "j", "re", "im"], rows())


def read_operator(path) -> OperatorMatrix:
    grid, rows = _read(path, ["i", "j", "re", "im"])
    n = grid.n
    m = np.zeros((n, n), dtype=np.complex128)
    for r in rows:
        m[int(r[0]), int(r[1])] = complex(float(r[2]), float(r[3]))
    return OperatorMatrix(grid, m)


# --- symbols -----------------------------------------------------------------

def _need(spec, *keys):
    missing = [k for k in keys if k not in spec]
    if missing:
        raise FormatError(f"symbol of type {spec.get('type')!r} is missing {', '.join(missing)}")


def symbol_from_json(spec: dict, base_dir="."):
    """Build a symbol from its JSON description (``type`` tag plus parameters)."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise FormatError("symbol JSON must be an object with a 'type' field")
    kind = spec["type"]
    if kind == "monomial":
        _need(spec, "m", "n")
        return Monomial(int(spec["m"]), int(spec["n"]))
    if kind == "quadratic":
        _need(spec, "M")
        return Quadratic(spec["M"])
    if kind == "kinetic_potential":
        return KineticPotential(float(spec.get("mass", 1.0)), spec.get("potential", "0"))
    if kind == "magnetic":
        return Magnetic(float(spec.get("mass", 1.0)), spec.get("vector_potential", "0"),
                        spec.get("potential", "0"))
    if kind == "plane_wave":
        _need(spec, "x1", "p1")
        return PlaneWave(PhasePoint(float(spec["x1"]), float(spec["p1"])))
    if kind == "grid":
        _need(spec, "path")
        return GridSymbol(read_field(os.path.join(base_dir, spec["path"])))
    if kind == "gaussian":
        return GaussianSymbol(float(spec.get("x0", 0.0)), float(spec.get("p0", 0.0)),
                              float(spec.get("width", 1.0)))
    raise FormatError(f"unknown symbol type {kind!r}")


def symbol_to_json(sym) -> dict:
    if isinstance(sym, Monomial):
        return {"type": "monomial", "m": sym.m, "n": sym.n}
    if isinstance(sym, Quadratic):
        return {"type": "quadratic", "M": [list(r) for r in sym.M]}
    if isinstance(sym, KineticPotential):
        return {"type": "kinetic_potential", "mass": sym.mass, "potential": render_expr(sym.potential)}
    if isinstance(sym, Magnetic):
        return {"type": "magnetic", "mass": sym.mass,
                "vector_potential": render_expr(sym.vector_potential),
                "potential": render_expr(sym.potential)}
    if isinstance(sym, PlaneWave):
        return {"type": "plane_wave", "x1": sym.z1.x, "p1": sym.z1.p}
    if isinstance(sym, GaussianSymbol):
        return {"type": "gaussian", "x0": sym.x0, "p0": sym.p0, "width": sym.width}
    raise FormatError(f"{type(sym).__name__} has no inline JSON form")


def load_symbol(path):
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from None
    return symbol_from_json(spec, os.path.dirname(os.path.abspath(path)))


# --- plotting ----------------------------------------------------------------

def write_gnuplot(path, csv_path, title="", column="re"):
    """gnuplot script drawing a heat map of a field CSV.

    The CSV has no blank lines between scans, so the map uses ``with image``
    (regular-grid raster) rather than ``pm3d`` surfaces.
    """
    col = {"re": 3, "im": 4}.get(column)
    using = f"1:2:{col}" if col else "1:2:(sqrt($3**2+$4**2))"
    rel = os.path.relpath(csv_path, os.path.dirname(os.path.abspath(path)) or ".")
    script = "\n".join([
        "set datafile separator ','",
        f"set title {json.dumps(title)}",
        "set xlabel 'x'",
        "set ylabel 'p'",
        "set size ratio -1",
        "set palette rgbformulae 33,13,10",
        # first non-comment row holds the column names
        "set key autotitle columnheader",
        f"plot '{rel}' using {using} with image notitle",
        "",
    ])
    with open(path, "w") as fh:
        fh.write(script)
