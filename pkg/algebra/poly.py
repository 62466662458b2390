"""Sparse bivariate polynomials with rational x-exponents and exact rational coefficients.

x-exponents may be fractional (denominator at most ``config.DENOMINATOR_LIMIT``) because the
shifts y -> y + psi(x) found during adaptation can carry fractional powers of x; y-exponents
are always non-negative integers.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

import config
from algebra.realroots import UniPoly
from errors import (DenominatorLimitExceeded, FractionalExponentLinearSub, NegativeBaseFractionalPower,
                    NegativeExponentResult, ZeroPolynomial)

logger = logging.getLogger(__name__)

Rational = Fraction


def as_rational(value):
    """Exact rational value; floats keep every bit of their binary expansion."""
    return Fraction(value)


def rational_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_denominator(ax):
    if ax.denominator > config.DENOMINATOR_LIMIT:
        raise DenominatorLimitExceeded(
            f"x-exponent {ax} has denominator above {config.DENOMINATOR_LIMIT}")


def _falling(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= a - i
    return out


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    ax: Fraction
    by: int

    def to_dict(self):
        return {"c": rational_str(self.coeff), "ax": rational_str(self.ax), "by": self.by}


class Polynomial:
    """Immutable finite sum of terms c * x^ax * y^by with no zero coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            items = ()
        elif isinstance(terms, dict):
            items = terms.items()
        else:
            items = (((t.ax, t.by), t.coeff) for t in terms)
        store = {}
        for (ax, by), c in items:
            ax, by, c = Fraction(ax), int(by), Fraction(c)
            if ax < 0 or by < 0:
                raise NegativeExponentResult(f"negative exponent in term x^{ax} y^{by}")
            _check_denominator(ax)
            key = (ax, by)
            store[key] = store.get(key, 0) + c
        self._terms = {k: v for k, v in store.items() if v != 0}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, ax, by):
        return cls({(ax, by): c})

    @classmethod
    def x(cls):
        return cls.monomial(1, 1, 0)

    @classmethod
    def y(cls):
        return cls.monomial(1, 0, 1)

    @classmethod
    def from_json(cls, data):
        return cls({(Fraction(t["ax"]), int(t["by"])): Fraction(t["c"]) for t in data})

    @property
    def terms(self):
        return tuple(Term(self._terms[k], k[0], k[1]) for k in sorted(self._terms))

    def items(self):
        return self._terms.items()

    def support(self):
        return set(self._terms)

    def coefficient(self, ax, by):
        return self._terms.get((Fraction(ax), int(by)), Fraction(0))

    def is_zero(self):
        return not self._terms

    def is_integer(self):
        return all(ax.denominator == 1 for ax, _ in self._terms)

    def y_degree(self):
        return max((by for _, by in self._terms), default=0)

    def to_json(self):
        return [t.to_dict() for t in self.terms]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return Polynomial({k: -v for k, v in self._terms.items()})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out, base = Polynomial.constant(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        return f"Polynomial({render(self)!r})"


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(as_rational(value))


def _powers(base, n):
    out = [Polynomial.constant(1)]
    for _ in range(n):
        out.append(out[-1] * base)
    return out


@dataclass(frozen=True)
class PsiSeries:
    """psi(x) = sum c_i x^{M_i}, exponents strictly increasing and at least 1."""

    terms: tuple = ()

    def __post_init__(self):
        last = None
        for c, m in self.terms:
            if c == 0:
                raise ValueError("psi terms must have nonzero coefficients")
            if m < 1 or (last is not None and m <= last):
                raise ValueError("psi exponents must be >= 1 and strictly increasing")
            last = m

    @property
    def order(self):
        """Smallest exponent, None when psi is identically zero (order infinity)."""
        return self.terms[0][1] if self.terms else None

    def is_integer(self):
        return all(Fraction(m).denominator == 1 for _, m in self.terms)

    def appended(self, c, m):
        c, m = Fraction(c), Fraction(m)
        if self.terms and self.terms[-1][1] == m:
            merged = self.terms[-1][0] + c
            head = self.terms[:-1]
            return PsiSeries(head + ((merged, m),) if merged else head)
        return PsiSeries(self.terms + ((c, m),))

    def as_polynomial(self):
        return Polynomial({(m, 0): c for c, m in self.terms})

    def reflected(self):
        """psi(-x) for integer exponents."""
        if not self.is_integer():
            raise NegativeBaseFractionalPower("psi with fractional exponents cannot be reflected")
        return PsiSeries(tuple((c * (-1) ** int(m), m) for c, m in self.terms))

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        for c, m in self.terms:
            out += float(c) * np.power(np.abs(xs), float(m))
        return out

    def to_dict(self):
        return [{"c": rational_str(c), "m": rational_str(m)} for c, m in self.terms]

    @classmethod
    def from_dict(cls, data):
        return cls(tuple((Fraction(t["c"]), Fraction(t["m"])) for t in data))


@dataclass(frozen=True)
class LinearMap2:
    """(x, y) -> (a x + b y, c x + d y)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("linear map must be invertible")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def swap(cls):
        return cls(0, 1, 1, 0)

    def compose(self, other):
        """Matrix product self * other, so p o (self o other) = (p o self) o other."""
        return LinearMap2(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self):
        k = self.det
        return LinearMap2(self.d / k, -self.b / k, -self.c / k, self.a / k)

    def is_identity(self):
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def to_dict(self):
        return [[rational_str(self.a), rational_str(self.b)], [rational_str(self.c), rational_str(self.d)]]

    @classmethod
    def from_dict(cls, rows):
        return cls(Fraction(rows[0][0]), Fraction(rows[0][1]), Fraction(rows[1][0]), Fraction(rows[1][1]))


def _mpf(q):
    q = as_rational(q)
    return mpmath.mpf(q.numerator) / q.denominator


def evaluate(p, x, y, precision_bits=None):
    """Value of p at (x, y) with the requested working precision (bits)."""
    bits = precision_bits or config.PRECISION_BITS
    x, y = as_rational(x), as_rational(y)
    with mpmath.workprec(bits):
        xm, ym = _mpf(x), _mpf(y)
        total = mpmath.mpf(0)
        for t in p.terms:
            if t.ax.denominator != 1 and x <= 0:
                raise NegativeBaseFractionalPower(f"x^{t.ax} at x = {x}")
            px = mpmath.mpf(1) if t.ax == 0 else mpmath.power(xm, _mpf(t.ax))
            py = ym ** t.by
            total += _mpf(t.coeff) * px * py
        return +total


def evaluate_array(p, xs, ys):
    """Vectorised float64 evaluation used by the numerical harness."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if not p.is_integer() and np.any(xs <= 0):
        raise NegativeBaseFractionalPower("fractional x-exponent evaluated at x <= 0")
    out = np.zeros(np.broadcast(xs, ys).shape)
    by_y = {}
    for t in p.terms:
        by_y.setdefault(t.by, []).append(t)
    for by, group in by_y.items():
        inner = np.zeros_like(out)
        for t in group:
            if t.ax.denominator == 1:
                inner = inner + float(t.coeff) * xs ** int(t.ax)
            else:
                inner = inner + float(t.coeff) * np.power(xs, float(t.ax))
        out = out + inner * ys ** by
    return out


def differentiate(p, var, order=1):
    if order < 0:
        raise ValueError("order must be non-negative")
    out = {}
    for (ax, by), c in p.items():
        if var == "y":
            if by < order:
                continue
            out[(ax, by - order)] = c * _falling(Fraction(by), order)
        elif var == "x":
            k = c * _falling(ax, order)
            if k == 0:
                continue
            if ax - order < 0:
                raise NegativeExponentResult(f"d^{order}/dx^{order} of x^{ax} has a negative exponent")
            out[(ax - order, by)] = k
        else:
            raise ValueError(f"unknown variable {var!r}")
    return Polynomial(out)


def substitute_y_shift(p, psi, sign=1):
    """p(x, y + sign * psi(x))."""
    if not psi.terms:
        return p
    base = Polynomial.y() + sign * psi.as_polynomial()
    powers = _powers(base, p.y_degree())
    out = Polynomial()
    for t in p.terms:
        out = out + Polynomial.monomial(t.coeff, t.ax, 0) * powers[t.by]
    return out


def substitute_linear(p, T):
    """p(a x + b y, c x + d y) for integer-exponent p."""
    if not p.is_integer():
        raise FractionalExponentLinearSub("linear substitution needs integer x-exponents")
    X = T.a * Polynomial.x() + T.b * Polynomial.y()
    Y = T.c * Polynomial.x() + T.d * Polynomial.y()
    max_a = max((int(t.ax) for t in p.terms), default=0)
    xp, yp = _powers(X, max_a), _powers(Y, p.y_degree())
    out = Polynomial()
    for t in p.terms:
        out = out + t.coeff * xp[int(t.ax)] * yp[t.by]
    return out


def hessian_determinant(p):
    pxx = differentiate(p, "x", 2)
    pyy = differentiate(p, "y", 2)
    pxy = differentiate(differentiate(p, "x"), "y")
    return pxx * pyy - pxy * pxy


def vanishing_order_origin(p):
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no vanishing order")
    return min(ax + by for ax, by in p.support())


def gradient_at_origin(p):
    return p.coefficient(1, 0), p.coefficient(0, 1)


def reflect_x(p):
    """p(-x, y)."""
    if not p.is_integer():
        raise NegativeBaseFractionalPower("cannot reflect a polynomial with fractional x-exponents")
    return Polynomial({(ax, by): c * (-1) ** int(ax) for (ax, by), c in p.items()})


def swap_axes(p):
    if not p.is_integer():
        raise FractionalExponentLinearSub("axis swap needs integer x-exponents")
    return Polynomial({(by, int(ax)): c for (ax, by), c in p.items()})


def restrict_x(p, side=1):
    """The univariate polynomial y -> p(side, y), side in {1, -1}."""
    coeffs = [Fraction(0)] * (p.y_degree() + 1)
    for (ax, by), c in p.items():
        if side < 0:
            if ax.denominator != 1:
                raise NegativeBaseFractionalPower(f"x^{ax} at x = -1")
            c = c * (-1) ** int(ax)
        coeffs[by] += c
    return UniPoly(coeffs)


def _render_power(var, e):
    e = Fraction(e)
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^({e.numerator}/{e.denominator})"


def render(p):
    """Canonical text that ``parsing.parse`` reads back to the same polynomial."""
    if p.is_zero():
        return "0"
    chunks = []
    for t in p.terms:
        c = abs(t.coeff)
        factors = [f for f in (_render_power("x", t.ax) if t.ax else "",
                               _render_power("y", t.by) if t.by else "") if f]
        if c != 1 or not factors:
            factors.insert(0, rational_str(c))
        body = "*".join(factors)
        if not chunks:
            chunks.append(f"-{body}" if t.coeff < 0 else body)
        else:
            chunks.append(f"{'-' if t.coeff < 0 else '+'} {body}")
    return " ".join(chunks)
