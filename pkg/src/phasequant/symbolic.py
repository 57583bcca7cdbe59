"""Exact noncommutative polynomials in the canonical operators ``X_j``, ``P_j``.

Coefficients are polynomials in the formal symbols ``hbar`` and ``tau`` with
Gaussian-rational coefficients; no floating point is involved anywhere.
The commutation relation is ``[X_j, P_j] = i hbar`` (``P = -i hbar d/dx``);
operators with different ``j`` commute.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

import numpy as np


# --- Gaussian rationals ---------------------------------------------------------

@dataclass(frozen=True)
class GaussQ:
    """``re + i*im`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def _exact(value):
        return isinstance(value, (GaussQ, int, Fraction))

    @staticmethod
    def of(value):
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact; pass GaussQ")
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction")
        return GaussQ(Fraction(value), Fraction(0))

    def __add__(self, o):
        if not GaussQ._exact(o) and not isinstance(o, (float, complex)):
            return NotImplemented
        o = GaussQ.of(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussQ.of(o))

    def __mul__(self, o):
        if not GaussQ._exact(o) and not isinstance(o, (float, complex)):
            return NotImplemented
        o = GaussQ.of(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussQ.of(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussQ(o.re / d, -o.im / d)

    def conj(self):
        return GaussQ(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_gaussian_integer(self):
        return self.re.denominator == 1 and self.im.denominator == 1

    def to_complex(self):
        return complex(float(self.re), float(self.im))


I = GaussQ(Fraction(0), Fraction(1))
ONE = GaussQ(Fraction(1))


# --- coefficients: polynomials in hbar and tau ---------------------------------------

class Coef:
    """Polynomial ``sum c[h, t] hbar^h tau^t`` with Gaussian-rational ``c``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, val in (terms or {}).items():
            val = GaussQ.of(val)
            if val:
                clean[key] = val
        self.terms = clean

    @classmethod
    def const(cls, value):
        return cls({(0, 0): GaussQ.of(value)})

    @classmethod
    def hbar(cls, power=1):
        return cls({(power, 0): ONE})

    @classmethod
    def tau(cls, power=1):
        return cls({(0, power): ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Coef):
            other = Coef.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = other if isinstance(other, Coef) else Coef.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, GaussQ()) + v
        return Coef(out)

    __radd__ = __add__

    def __neg__(self):
        return Coef({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, Coef) else Coef.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Coef.const(other) - self

    def __mul__(self, other):
        other = other if isinstance(other, Coef) else Coef.const(other)
        out = {}
        for (h1, t1), v1 in self.terms.items():
            for (h2, t2), v2 in other.terms.items():
                key = (h1 + h2, t1 + t2)
                out[key] = out.get(key, GaussQ()) + v1 * v2
        return Coef(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Coef.const(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self):
        return Coef({k: v.conj() for k, v in self.terms.items()})

    def hbar_degree(self):
        return max((h for h, _ in self.terms), default=0)

    def tau_degree(self):
        return max((t for _, t in self.terms), default=0)

    def integrate_tau(self):
        out = {}
        for (h, t), v in self.terms.items():
            out[(h, 0)] = out.get((h, 0), GaussQ()) + v * Fraction(1, t + 1)
        return Coef(out)

    def substitute_tau(self, value):
        value = Fraction(value)
        out = {}
        for (h, t), v in self.terms.items():
            out[(h, 0)] = out.get((h, 0), GaussQ()) + v * value ** t
        return Coef(out)

    def evaluate(self, hbar, tau=None):
        total = 0j
        for (h, t), v in self.terms.items():
            if t and tau is None:
                raise ValueError("coefficient still depends on tau")
            total += v.to_complex() * hbar ** h * (tau ** t if t else 1.0)
        return total

    def single(self):
        """The lone ``(key, value)`` if this is a monomial, else None."""
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    def __repr__(self):
        return f"Coef({render_coef(self)})"


# --- words and polynomials -----------------------------------------------------

# a letter is (kind, j) with kind 0 for X and 1 for P; words are tuples of letters
X_KIND, P_KIND = 0, 1


class NCPoly:
    """Finite sum of words with :class:`Coef` coefficients; zero terms are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, c in (terms or {}).items():
            c = c if isinstance(c, Coef) else Coef.const(c)
            if c:
                clean[tuple(word)] = c
        self.terms = clean

    @classmethod
    def scalar(cls, c):
        return cls({(): c if isinstance(c, Coef) else Coef.const(c)})

    @classmethod
    def word(cls, word, c=1):
        return cls({tuple(word): c})

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        return multiply(self, _as_poly(other))

    def __rmul__(self, other):
        return multiply(_as_poly(other), self)

    def __pow__(self, k):
        out = NCPoly.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"NCPoly({render(self)!r})"

    def __str__(self):
        return render(self)

    def hbar_degrees(self):
        return {w: c.hbar_degree() for w, c in self.terms.items()}

    def has_tau(self):
        return any(c.tau_degree() > 0 for c in self.terms.values())


def _as_poly(value):
    if isinstance(value, NCPoly):
        return value
    return NCPoly.scalar(value)


def X(j=1):
    return NCPoly.word(((X_KIND, j),))


def P(j=1):
    return NCPoly.word(((P_KIND, j),))


HBAR = NCPoly.scalar(Coef.hbar())
TAU = NCPoly.scalar(Coef.tau())


def multiply(a: NCPoly, b: NCPoly) -> NCPoly:
    """Free-algebra product: concatenate words, multiply coefficients."""
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            c = c1 * c2
            out[w] = out[w] + c if w in out else c
    return NCPoly(out)


# --- normal ordering -----------------------------------------------------------------

_MINUS_I_HBAR = Coef({(1, 0): -I})


def _normal_single(kinds):
    """Normal-order a word in one pair ``X, P``; returns {(a, b): Coef} for ``X^a P^b``."""
    state = {(0, 0): Coef.const(1)}
    for kind in kinds:
        nxt = {}
        for (a, b), c in state.items():
            if kind == P_KIND:
                terms = [((a, b + 1), c)]
            else:
                # X^a P^b X = X^(a+1) P^b - i hbar b X^a P^(b-1)
                terms = [((a + 1, b), c)]
                if b:
                    terms.append(((a, b - 1), c * _MINUS_I_HBAR * b))
            for key, val in terms:
                nxt[key] = nxt[key] + val if key in nxt else val
        state = {k: v for k, v in nxt.items() if v}
    return state


def _normal_word(word):
    """Normal form of one word as {word: Coef}."""
    by_j = {}
    for kind, j in word:
        by_j.setdefault(j, []).append(kind)
    result = {(): Coef.const(1)}
    for j in sorted(by_j):
        part = _normal_single(by_j[j])
        nxt = {}
        for w, c in result.items():
            for (a, b), c2 in part.items():
                key = w + ((X_KIND, j),) * a + ((P_KIND, j),) * b
                val = c * c2
                nxt[key] = nxt[key] + val if key in nxt else val
        result = nxt
    return result


def normal_form(a: NCPoly) -> NCPoly:
    """Rewrite every word with all ``X_j`` left of all ``P_j`` and letters sorted by ``j``."""
    out = {}
    for word, c in a.terms.items():
        for w, c2 in _normal_word(word).items():
            val = c * c2
            out[w] = out[w] + val if w in out else val
    return NCPoly(out)


def is_normal(a: NCPoly) -> bool:
    for word in a.terms:
        keys = [(j, kind) for kind, j in word]
        if keys != sorted(keys):
            return False
    return True


# --- ordering rules ----------------------------------------------------------------

class OrderingRule(Enum):
    BORN_JORDAN = "bj"
    WEYL = "weyl"
    KOHN_NIRENBERG = "kn"
    SHUBIN_TAU = "tau"


def _xp_word(pattern, j):
    """Build a word from ``[(kind, power), ...]``."""
    word = ()
    for kind, power in pattern:
        word += ((kind, j),) * power
    return word


def _check_exponents(m, n):
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise ValueError(f"exponents must be non-negative integers, got m={m!r}, n={n!r}")


def shubin_tau_x_form(m, n, j=1):
    """``sum_k C(m,k) tau^k (1-tau)^(m-k) X^k P^n X^(m-k)``."""
    _check_exponents(m, n)
    t = Coef.tau()
    u = Coef.const(1) - t
    out = NCPoly()
    for k in range(m + 1):
        c = Coef.const(comb(m, k)) * t ** k * u ** (m - k)
        out = out + NCPoly.word(_xp_word([(X_KIND, k), (P_KIND, n), (X_KIND, m - k)], j), c)
    return out


def shubin_tau_p_form(m, n, j=1):
    """``sum_k C(n,k) (1-tau)^k tau^(n-k) P^k X^m P^(n-k)``."""
    _check_exponents(m, n)
    t = Coef.tau()
    u = Coef.const(1) - t
    out = NCPoly()
    for k in range(n + 1):
        c = Coef.const(comb(n, k)) * u ** k * t ** (n - k)
        out = out + NCPoly.word(_xp_word([(P_KIND, k), (X_KIND, m), (P_KIND, n - k)], j), c)
    return out


def born_jordan_p_form(m, n, j=1):
    """``(n+1)^-1 sum_k P^(n-k) X^m P^k``."""
    _check_exponents(m, n)
    c = Coef.const(Fraction(1, n + 1))
    out = NCPoly()
    for k in range(n + 1):
        out = out + NCPoly.word(_xp_word([(P_KIND, n - k), (X_KIND, m), (P_KIND, k)], j), c)
    return out


def born_jordan_x_form(m, n, j=1):
    """``(m+1)^-1 sum_k X^k P^n X^(m-k)``."""
    _check_exponents(m, n)
    c = Coef.const(Fraction(1, m + 1))
    out = NCPoly()
    for k in range(m + 1):
        out = out + NCPoly.word(_xp_word([(X_KIND, k), (P_KIND, n), (X_KIND, m - k)], j), c)
    return out


def weyl_form(m, n, j=1):
    """``2^-n sum_k C(n,k) P^(n-k) X^m P^k``."""
    _check_exponents(m, n)
    out = NCPoly()
    for k in range(n + 1):
        c = Coef.const(Fraction(comb(n, k), 2 ** n))
        out = out + NCPoly.word(_xp_word([(P_KIND, n - k), (X_KIND, m), (P_KIND, k)], j), c)
    return out


def kohn_nirenberg_form(m, n, j=1):
    _check_exponents(m, n)
    return NCPoly.word(_xp_word([(X_KIND, m), (P_KIND, n)], j))


def order_monomial(rule, m: int, n: int, j: int = 1) -> NCPoly:
    """Operator assigned to the symbol ``x_j^m p_j^n`` by an ordering rule, before normal ordering.

    Parameters
    ----------
    rule : OrderingRule or str
        ``bj``, ``weyl``, ``kn`` or ``tau``. The tau rule keeps ``tau`` formal.
    m, n : int
        Non-negative exponents of ``x`` and ``p``.
    j : int
        Degree-of-freedom index.
    """
    rule = OrderingRule(rule) if not isinstance(rule, OrderingRule) else rule
    if int(j) != j or j < 1:
        raise ValueError("index j must be a positive integer")
    if rule is OrderingRule.BORN_JORDAN:
        return born_jordan_p_form(m, n, j)
    if rule is OrderingRule.WEYL:
        return weyl_form(m, n, j)
    if rule is OrderingRule.KOHN_NIRENBERG:
        return kohn_nirenberg_form(m, n, j)
    return shubin_tau_x_form(m, n, j)


def integrate_tau(a: NCPoly) -> NCPoly:
    """Exact ``int_0^1 a dtau`` coefficient by coefficient."""
    return NCPoly({w: c.integrate_tau() for w, c in a.terms.items()})


def substitute_tau(a: NCPoly, value) -> NCPoly:
    """Replace ``tau`` by an exact rational."""
    if isinstance(value, float):
        raise TypeError("tau must be an exact rational (int, Fraction or 'r/s' string)")
    value = Fraction(value)
    return NCPoly({w: c.substitute_tau(value) for w, c in a.terms.items()})


def formal_adjoint(a: NCPoly) -> NCPoly:
    """Reverse every word and conjugate every coefficient (``hbar``, ``tau`` real)."""
    return NCPoly({tuple(reversed(w)): c.conj() for w, c in a.terms.items()})


# --- numeric bridge ---------------------------------------------------------------

def to_spectral_operator(a: NCPoly, grid):
    """Matrix of a tau-free polynomial with ``X`` diagonal and ``P`` spectral.

    ``hbar`` is evaluated at ``grid.hbar``; only ``j = 1`` letters are allowed.
    """
    from .quantizers import OperatorMatrix, spectral_p

    if a.has_tau():
        raise ValueError("polynomial still contains the formal tau; substitute or integrate it first")
    n = grid.n
    xm = np.diag(grid.x).astype(np.complex128)
    pm = spectral_p(grid)
    total = np.zeros((n, n), dtype=np.complex128)
    for word, c in a.terms.items():
        mat = np.eye(n, dtype=np.complex128)
        for kind, j in word:
            if j != 1:
                raise ValueError("numeric operators exist only for one degree of freedom (j = 1)")
            mat = mat @ (xm if kind == X_KIND else pm)
        total += c.evaluate(grid.hbar) * mat
    return OperatorMatrix(grid, total / grid.dx)


# --- canonical rendering ---------------------------------------------------------------

def _frac(q: Fraction):
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _gauss_abs(g: GaussQ):
    """(sign, text) with text empty for magnitude one; text carries the i factor."""
    if g.im == 0:
        sign = -1 if g.re < 0 else 1
        mag = abs(g.re)
        return sign, ("" if mag == 1 else _frac(mag))
    if g.re == 0:
        sign = -1 if g.im < 0 else 1
        mag = abs(g.im)
        return sign, ("i" if mag == 1 else f"{_frac(mag)}*i")
    return 1, f"({_frac(g.re) if g.re >= 0 else '-' + _frac(-g.re)} {'+' if g.im > 0 else '-'} {_frac(abs(g.im))}*i)"


def _power(name, k):
    return name if k == 1 else f"{name}^{k}"


def _symbols(h, t):
    parts = []
    if h:
        parts.append(_power("hbar", h))
    if t:
        parts.append(_power("tau", t))
    return parts


def _coef_key(item):
    (h, t), _ = item
    return (h, t)


def render_coef(c: Coef) -> str:
    """Signed rendering of a coefficient polynomial, e.g. ``1 - tau`` or ``-2*i*hbar``."""
    if not c:
        return "0"
    pieces = []
    for idx, ((h, t), g) in enumerate(sorted(c.terms.items(), key=_coef_key)):
        sign, num = _gauss_abs(g)
        body = "*".join(([num] if num else []) + _symbols(h, t)) or "1"
        if idx == 0:
            pieces.append(("-" if sign < 0 else "") + body)
        else:
            pieces.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(pieces)


def _letter(kind, j, k):
    name = ("X" if kind == X_KIND else "P") + ("" if j == 1 else f"_{j}")
    return _power(name, k)


def render_word(word) -> str:
    out = []
    i = 0
    while i < len(word):
        k = 1
        while i + k < len(word) and word[i + k] == word[i]:
            k += 1
        out.append(_letter(word[i][0], word[i][1], k))
        i += k
    return " ".join(out)


def _word_key(word):
    # longer words first, then lexicographic with X < P, then by index j
    return (-len(word), tuple((kind, j) for kind, j in word))


def _term(word, c, first):
    w = render_word(word)
    single = c.single()
    if single is not None:
        (h, t), g = single
        sign, num = _gauss_abs(g)
        factors = ([num] if num else []) + _symbols(h, t)
        if w:
            body = "*".join(factors + [w])
        else:
            body = "*".join(factors) or "1"
    else:
        sign = 1
        body = f"({render_coef(c)})" + (f"*{w}" if w else "")
    if first:
        return ("-" if sign < 0 else "") + body
    return ("- " if sign < 0 else "+ ") + body


def _common_factor(items):
    """Real rational ``f != 1`` dividing every coefficient into Gaussian integers, or None."""
    single = items[0][1].single()
    if single is None or len(items) < 2:
        return None
    (h, t), g = single
    if (h, t) != (0, 0) or g.im != 0 or abs(g.re) == 1:
        return None
    f = abs(g.re)
    for _, c in items:
        for v in c.terms.values():
            if not (v * GaussQ(1 / f)).is_gaussian_integer():
                return None
    return f


def render(a: NCPoly) -> str:
    """Canonical text: longest words first, then ``X < P`` lexicographic, then by index.

    A common rational factor is pulled out front when every coefficient is an
    integer multiple of it, e.g. ``(1/2)*(X P + P X)``.
    """
    if not a.terms:
        return "0"
    items = sorted(a.terms.items(), key=lambda kv: _word_key(kv[0]))
    f = _common_factor(items)
    if f is not None:
        scaled = [(w, c * Coef.const(1 / f)) for w, c in items]
        inner = " ".join(_term(w, c, i == 0) for i, (w, c) in enumerate(scaled))
        return f"{_frac(f)}*({inner})"
    return " ".join(_term(w, c, i == 0) for i, (w, c) in enumerate(items))
