"""Hot inner loops, with a numba path and a pure-numpy path.

The backend is chosen once at import time from ``PHASEQUANT_BACKEND``
(``numba`` or ``numpy``).  When the variable is unset numba is used if it
imports, numpy otherwise.  Both implementations of every kernel are always
importable under their explicit names (``*_numpy`` / ``*_numba``) so tests
and the benchmark can compare them directly.
"""
import os

import numpy as np

try:
    import numba
    from numba import njit, prange
    HAS_NUMBA = True
    # the system TBB is too old for numba; skip it instead of warning
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_requested = os.environ.get("PHASEQUANT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"PHASEQUANT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numpy" if (_requested == "numpy" or not HAS_NUMBA) else "numba"


# ---------------------------------------------------------------------------
# Heisenberg-sum assembly
#
#   M[i, (i - shift[s]) % n] = sum_k coef[s, k] * phase[k, i]
#
# One output diagonal per shift row ``s``; rows never collide, so the
# parallel loop over ``s`` is race free and the k-summation order is fixed.
# ---------------------------------------------------------------------------

def assemble_shifts_numpy(coef, phase, shift):
    n = phase.shape[1]
    diag = coef @ phase
    out = np.zeros((n, n), dtype=np.complex128)
    rows = np.arange(n)
    for s in range(coef.shape[0]):
        out[rows, (rows - shift[s]) % n] = diag[s]
    return out


def _lag_products_numpy(u, v, n):
    # g[i, m] = u[(2i + m) % 2n] * conj(v[(2i - m) % 2n]), m in [-n/2, n/2),
    # column index m % n; the Nyquist lag is the mean of m = +n/2 and -n/2.
    two_n = u.shape[0]
    i = np.arange(n)[:, None]
    m = np.arange(-n // 2, n // 2)[None, :]
    g = u[(2 * i + m) % two_n] * np.conj(v[(2 * i - m) % two_n])
    edge = u[(2 * i[:, 0] + n // 2) % two_n] * np.conj(v[(2 * i[:, 0] - n // 2) % two_n])
    g[:, 0] = 0.5 * (g[:, 0] + edge)
    return np.roll(g, -(n // 2), axis=1)


def literal_tau_wigner_numpy(u, v, n, refine, r, s_den, pk_dx_over_hbar):
    """Direct Riemann sum of the tau-Wigner integral on a refined lattice.

    ``u`` and ``v`` are the signals sampled on the ``refine``-fold grid; the
    lag is ``y = m*dx`` for ``m`` in ``[-n/2, n/2)`` so that ``x + tau*y`` and
    ``x - (1 - tau)*y`` are refined-lattice points when ``tau = r/s_den``.
    Returns the un-normalised sum ``S[i, k]``.
    """
    big = u.shape[0]
    step = refine // s_den
    m = np.arange(-n // 2, n // 2)
    expo = np.exp(-1j * np.outer(m, pk_dx_over_hbar))  # (lag, k)
    out = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        base = i * refine
        g = u[(base + r * step * m) % big] * np.conj(v[(base - (s_den - r) * step * m) % big])
        out[i] = g @ expo
    return out


if HAS_NUMBA:

    @njit(parallel=True, cache=True)
    def assemble_shifts_numba(coef, phase, shift):
        n = phase.shape[1]
        diag = np.dot(coef, phase)  # BLAS; the scatter below is the parallel part
        out = np.zeros((n, n), dtype=np.complex128)
        for s in prange(coef.shape[0]):
            sh = shift[s]
            for i in range(n):
                out[i, (i - sh) % n] = diag[s, i]
        return out

    @njit(parallel=True, cache=True)
    def _lag_products_numba(u, v, n):
        two_n = u.shape[0]
        half = n // 2
        g = np.empty((n, n), dtype=np.complex128)
        for i in prange(n):
            for m in range(-half, half):
                val = u[(2 * i + m) % two_n] * np.conj(v[(2 * i - m) % two_n])
                if m == -half:
                    edge = u[(2 * i + half) % two_n] * np.conj(v[(2 * i - half) % two_n])
                    val = 0.5 * (val + edge)
                g[i, m % n] = val
        return g

    @njit(parallel=True, cache=True)
    def literal_tau_wigner_numba(u, v, n, refine, r, s_den, pk_dx_over_hbar):
        big = u.shape[0]
        step = refine // s_den
        half = n // 2
        expo = np.empty((n, n), dtype=np.complex128)
        for j in range(n):
            for k in range(n):
                expo[j, k] = np.exp(-1j * pk_dx_over_hbar[k] * (j - half))
        out = np.empty((n, n), dtype=np.complex128)
        for i in prange(n):
            base = i * refine
            g = np.empty(n, dtype=np.complex128)
            for j in range(n):
                m = j - half
                g[j] = u[(base + r * step * m) % big] * np.conj(v[(base - (s_den - r) * step * m) % big])
            for k in range(n):
                acc = 0j
                for j in range(n):
                    acc += g[j] * expo[j, k]
                out[i, k] = acc
        return out

    def set_threads(count):
        numba.set_num_threads(int(count))

else:  # pragma: no cover
    assemble_shifts_numba = assemble_shifts_numpy
    _lag_products_numba = _lag_products_numpy
    literal_tau_wigner_numba = literal_tau_wigner_numpy

    def set_threads(count):
        return None


if BACKEND == "numba":
    assemble_shifts = assemble_shifts_numba
    lag_products = _lag_products_numba
    literal_tau_wigner = literal_tau_wigner_numba
else:
    assemble_shifts = assemble_shifts_numpy
    lag_products = _lag_products_numpy
    literal_tau_wigner = literal_tau_wigner_numpy

lag_products_numpy = _lag_products_numpy
lag_products_numba = _lag_products_numba
